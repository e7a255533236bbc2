#include "monosig/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "monosig/parallel.hpp"

namespace monosig {

Trajectory integrate(const SignallingSystem& system, const Macrostate& n0, double t_end,
                     const IntegrationOptions& options)
{
    require_valid(system);
    if (n0.size() != static_cast<Eigen::Index>(system.size()))
        throw InvalidInput("initial macrostate has the wrong dimension");
    require_macrostate(n0, "initial macrostate");
    return integrate_on_simplex([&](const Eigen::VectorXd& n) { return drift(system, n); }, n0,
                                t_end, options);
}

const char* to_string(Stability s)
{
    switch (s) {
    case Stability::Stable:
        return "Stable";
    case Stability::Unstable:
        return "Unstable";
    case Stability::Saddle:
        return "Saddle";
    case Stability::Marginal:
        return "Marginal";
    }
    return "?";
}

Eigen::MatrixXd tangent_basis(std::size_t K, const std::vector<std::size_t>& fixed)
{
    std::vector<Eigen::Index> free;
    for (std::size_t i = 0; i < K; ++i)
        if (std::find(fixed.begin(), fixed.end(), i) == fixed.end())
            free.push_back(static_cast<Eigen::Index>(i));
    const auto k = static_cast<Eigen::Index>(K);
    if (free.size() < 2)
        return Eigen::MatrixXd::Zero(k, 0);

    const auto dim = static_cast<Eigen::Index>(free.size()) - 1;
    Eigen::MatrixXd span = Eigen::MatrixXd::Zero(k, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        span(free[static_cast<std::size_t>(c) + 1], c) = 1.0;
        span(free[0], c) = -1.0;
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(span);
    return qr.householderQ() * Eigen::MatrixXd::Identity(k, dim);
}

Stability classify(const std::vector<std::complex<double>>& eigenvalues, double threshold)
{
    bool pos = false, neg = false;
    for (const auto& ev : eigenvalues) {
        if (std::abs(ev.real()) <= threshold)
            return Stability::Marginal;
        (ev.real() > 0.0 ? pos : neg) = true;
    }
    if (pos && neg)
        return Stability::Saddle;
    return pos ? Stability::Unstable : Stability::Stable;
}

namespace {

// Compositions of `total` into `parts` nonnegative integers.
void compositions(int total, std::size_t parts, std::vector<int>& current,
                  std::vector<std::vector<int>>& out)
{
    if (parts == 1) {
        current.push_back(total);
        out.push_back(current);
        current.pop_back();
        return;
    }
    for (int k = total; k >= 0; --k) {
        current.push_back(k);
        compositions(total - k, parts - 1, current, out);
        current.pop_back();
    }
}

struct Slice {
    std::vector<std::size_t> free;
    std::vector<std::size_t> fixed;
    Eigen::VectorXd base;  ///< committed fractions, zero elsewhere
    double free_mass = 1.0;
};

Slice make_slice(const SignallingSystem& system, const EquilibriumOptions& options)
{
    const auto K = system.size();
    Slice slice;
    slice.fixed = system.committed;
    slice.base = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K));
    for (auto [index, fraction] : options.committed_fractions) {
        if (!system.is_committed(index))
            throw InvalidParameter("committed fraction given for a non-committed state");
        if (!(fraction >= 0.0 && fraction <= 1.0))
            throw InvalidParameter("committed fraction outside [0, 1]");
        slice.base(static_cast<Eigen::Index>(index)) = fraction;
    }
    slice.free_mass = 1.0 - slice.base.sum();
    if (slice.free_mass < -kSimplexTol)
        throw InvalidParameter("committed fractions exceed 1");
    slice.free_mass = std::max(0.0, slice.free_mass);
    for (std::size_t i = 0; i < K; ++i)
        if (!system.is_committed(i))
            slice.free.push_back(i);
    return slice;
}

void project_to_slice(Eigen::VectorXd& n, const Slice& slice)
{
    double mass = 0.0;
    for (auto i : slice.free) {
        auto& v = n(static_cast<Eigen::Index>(i));
        v = std::max(0.0, v);
        mass += v;
    }
    if (mass <= 0.0)
        return;
    for (auto i : slice.free)
        n(static_cast<Eigen::Index>(i)) *= slice.free_mass / mass;
    for (auto i : slice.fixed)
        n(static_cast<Eigen::Index>(i)) = slice.base(static_cast<Eigen::Index>(i));
}

std::optional<Eigen::VectorXd> newton(const SignallingSystem& system, Eigen::VectorXd n,
                                      const Slice& slice, const Eigen::MatrixXd& P,
                                      const EquilibriumOptions& options)
{
    auto norm = [&](const Eigen::VectorXd& x) { return drift(system, x).cwiseAbs().maxCoeff(); };
    double r = norm(n);
    for (int it = 0; it < options.max_newton_iterations && r > 1e-15; ++it) {
        if (P.cols() == 0)
            break;
        const Eigen::MatrixXd A = P.transpose() * jacobian(system, n) * P;
        const Eigen::VectorXd rhs = -(P.transpose() * drift(system, n));
        const Eigen::VectorXd step = P * A.completeOrthogonalDecomposition().solve(rhs);
        if (!step.allFinite())
            return std::nullopt;

        double t = 1.0;
        Eigen::VectorXd trial;
        double rt = std::numeric_limits<double>::infinity();
        for (int back = 0; back < 30; ++back, t *= 0.5) {
            trial = n + t * step;
            project_to_slice(trial, slice);
            rt = norm(trial);
            if (rt < r)
                break;
        }
        if (!(rt < r))
            break;
        const double moved = (trial - n).cwiseAbs().maxCoeff();
        n = trial;
        r = rt;
        if (moved < 1e-16)
            break;
    }
    if (!(r <= options.residual_tol))
        return std::nullopt;
    return n;
}

} // namespace

EquilibriumSearch find_equilibria(const SignallingSystem& system,
                                  const EquilibriumOptions& options)
{
    require_valid(system);
    if (options.grid_density < 2)
        throw InvalidParameter("grid density must be at least 2");

    const auto K = system.size();
    const Slice slice = make_slice(system, options);
    const Eigen::MatrixXd P = tangent_basis(K, slice.fixed);

    std::vector<std::vector<int>> grid;
    std::vector<int> scratch;
    compositions(options.grid_density, slice.free.size(), scratch, grid);

    EquilibriumSearch search;
    search.seeds = grid.size();
    std::vector<std::optional<Eigen::VectorXd>> roots(grid.size());
    parallel_for(grid.size(), [&](std::size_t g) {
        Eigen::VectorXd seed = slice.base;
        for (std::size_t k = 0; k < slice.free.size(); ++k)
            seed(static_cast<Eigen::Index>(slice.free[k])) =
                slice.free_mass * grid[g][k] / options.grid_density;
        roots[g] = newton(system, seed, slice, P, options);
    });

    for (const auto& root : roots) {
        if (!root) {
            ++search.dropped_seeds;
            continue;
        }
        const double residual = drift(system, *root).cwiseAbs().maxCoeff();
        bool duplicate = false;
        for (auto& eq : search.equilibria) {
            if ((eq.state - *root).cwiseAbs().maxCoeff() <= options.dedup_distance) {
                duplicate = true;
                if (residual < eq.residual) {
                    eq.state = *root;
                    eq.residual = residual;
                }
                break;
            }
        }
        if (!duplicate)
            search.equilibria.push_back({*root, residual, Stability::Marginal, {}});
    }

    for (auto& eq : search.equilibria) {
        if (P.cols() > 0) {
            const Eigen::MatrixXd A = P.transpose() * jacobian(system, eq.state) * P;
            Eigen::EigenSolver<Eigen::MatrixXd> solver(A, false);
            const auto& ev = solver.eigenvalues();
            eq.eigenvalues.assign(ev.data(), ev.data() + ev.size());
            std::sort(eq.eigenvalues.begin(), eq.eigenvalues.end(),
                      [](const auto& a, const auto& b) {
                          return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
                      });
        }
        eq.classification = classify(eq.eigenvalues, options.marginal_threshold);
    }
    std::sort(search.equilibria.begin(), search.equilibria.end(),
              [](const Equilibrium& a, const Equilibrium& b) {
                  for (Eigen::Index i = 0; i < a.state.size(); ++i)
                      if (std::abs(a.state(i) - b.state(i)) > 1e-12)
                          return a.state(i) > b.state(i);
                  return false;
              });
    return search;
}

namespace {

struct SweepRoles {
    std::size_t committed;
    std::size_t target;
    std::size_t opposing;
};

SweepRoles sweep_roles(const SignallingSystem& system, std::size_t committed,
                       const SweepOptions& options)
{
    if (committed >= system.size() || !system.is_committed(committed))
        throw InvalidParameter("sweep state is not a committed state of the system");
    const double ac = system.alpha(static_cast<Eigen::Index>(committed));

    SweepRoles roles{committed, system.size(), system.size()};
    if (options.target) {
        roles.target = system.spins.index_of(*options.target);
    } else {
        for (std::size_t i = 0; i < system.size() && roles.target == system.size(); ++i)
            if (!system.is_committed(i) &&
                std::abs(system.alpha(static_cast<Eigen::Index>(i)) - ac) <= kStochasticTol)
                roles.target = i;
    }
    if (options.opposing) {
        roles.opposing = system.spins.index_of(*options.opposing);
    } else {
        double far = -1.0;
        for (std::size_t i = 0; i < system.size(); ++i) {
            const double gap = std::abs(system.alpha(static_cast<Eigen::Index>(i)) - ac);
            if (!system.is_committed(i) && gap > far) {
                far = gap;
                roles.opposing = i;
            }
        }
    }
    if (roles.target >= system.size() || roles.opposing >= system.size())
        throw InvalidParameter("cannot infer target/opposing states for the sweep");
    if (roles.target == roles.opposing || system.is_committed(roles.opposing))
        throw InvalidParameter("sweep target and opposing states must differ and be uncommitted");
    return roles;
}

SweepPoint evaluate(const SignallingSystem& system, const SweepRoles& roles, double q,
                    const SweepOptions& options)
{
    Macrostate n0 = Macrostate::Zero(static_cast<Eigen::Index>(system.size()));
    n0(static_cast<Eigen::Index>(roles.committed)) = q;
    n0(static_cast<Eigen::Index>(roles.opposing)) = 1.0 - q;
    IntegrationOptions io;
    io.dt = options.dt;
    io.record_interval = options.t_end;
    SweepPoint point;
    point.q = q;
    point.terminal = integrate(system, n0, options.t_end, io).back();
    point.target_mass = point.terminal(static_cast<Eigen::Index>(roles.target)) +
                        point.terminal(static_cast<Eigen::Index>(roles.committed));
    point.dominant = point.target_mass > options.dominance_threshold;
    return point;
}

} // namespace

SweepPoint classify_committed_fraction(const SignallingSystem& system, std::size_t committed_state,
                                       double q, const SweepOptions& options)
{
    if (!(q >= 0.0 && q <= 1.0))
        throw InvalidParameter("committed fraction must lie in [0, 1]");
    return evaluate(system, sweep_roles(system, committed_state, options), q, options);
}

SweepResult sweep_committed(const SignallingSystem& system, std::size_t committed_state,
                            double q_low, double q_high, double tol, const SweepOptions& options)
{
    if (!(q_low >= 0.0 && q_low < q_high && q_high <= 1.0))
        throw InvalidParameter("sweep needs 0 <= q_low < q_high <= 1");
    if (!(tol > 0.0))
        throw InvalidParameter("sweep tolerance must be positive");
    const auto roles = sweep_roles(system, committed_state, options);

    SweepResult result;
    result.target = system.spins.label(roles.target);
    result.opposing = system.spins.label(roles.opposing);
    auto lo = evaluate(system, roles, q_low, options);
    auto hi = evaluate(system, roles, q_high, options);
    result.classifications = {lo, hi};
    if (lo.dominant == hi.dominant)
        throw NoTransitionError("committed fractions " + std::to_string(q_low) + " and " +
                                std::to_string(q_high) + " classify identically");

    const bool low_dominant = lo.dominant;
    double a = q_low, b = q_high;
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        auto point = evaluate(system, roles, mid, options);
        result.classifications.push_back(point);
        (point.dominant == low_dominant ? a : b) = mid;
    }
    result.lo = a;
    result.hi = b;
    result.qc = 0.5 * (a + b);
    return result;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_ordered_pair(const Eigen::MatrixXd& generators,
                                                                Rng& rng)
{
    const auto dim = static_cast<std::size_t>(generators.rows());
    Eigen::VectorXd lower = sample_simplex(rng, dim);
    if (generators.cols() == 0)
        return {lower, lower};

    // Sparse lambda exercises the faces of the cone as well as its interior.
    Eigen::VectorXd lambda(generators.cols());
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        lambda(i) = rng.uniform() < 1.0 / 3.0 ? 0.0 : rng.exponential();
    if (lambda.isZero())
        lambda(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(lambda.size())))) =
            1.0;
    const Eigen::VectorXd step = generators * lambda;

    double reach = 1.0;
    for (Eigen::Index i = 0; i < step.size(); ++i)
        if (step(i) < 0.0)
            reach = std::min(reach, lower(i) / -step(i));
    Eigen::VectorXd upper = lower + rng.uniform() * reach * step;
    upper = upper.cwiseMax(0.0);
    return {lower, upper};
}

std::vector<OrderViolation> check_order_preservation(const Cone& cone, const Flow& flow,
                                                     const HarnessOptions& options)
{
    std::vector<std::vector<OrderViolation>> per_pair(options.pair_count);
    parallel_for(options.pair_count, [&](std::size_t k) {
        Rng rng(derive_seed(options.seed, k));
        const auto [lower, upper] = sample_ordered_pair(cone.generators, rng);
        const Trajectory a = flow(lower);
        const Trajectory b = flow(upper);
        for (std::size_t i = 1; i < a.size(); ++i) {
            const Eigen::VectorXd d = b.states[i] - a.states[i];
            const auto membership = cone_contains(cone, d);
            if (!membership.contains)
                per_pair[k].push_back({k, a.times[i], membership.residual, lower, upper});
        }
    });
    std::vector<OrderViolation> out;
    for (auto& v : per_pair)
        out.insert(out.end(), v.begin(), v.end());
    return out;
}

std::vector<OrderViolation> order_harness(const SignallingSystem& system,
                                          const PartialOrder& order,
                                          const HarnessOptions& options)
{
    require_valid(system);
    if (order.size() != system.size())
        throw InvalidInput("order and system sizes differ");
    if (options.checkpoints == 0)
        throw InvalidParameter("harness needs at least one checkpoint");
    const Cone cone = make_cone(order, options.tol);
    IntegrationOptions io;
    io.dt = options.dt;
    io.record_interval = options.t_end / static_cast<double>(options.checkpoints);
    return check_order_preservation(
        cone, [&](const Eigen::VectorXd& n0) { return integrate(system, n0, options.t_end, io); },
        options);
}

} // namespace monosig
