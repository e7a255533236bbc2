#include "monosig/monotonicity.hpp"

#include <algorithm>
#include <limits>

#include "monosig/meanfield.hpp"
#include "monosig/parallel.hpp"
#include "monosig/random.hpp"

namespace monosig {

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::CertifiedMonotone:
        return "CertifiedMonotone";
    case Verdict::NotCertified:
        return "NotCertified";
    case Verdict::NoOrderExists:
        return "NoOrderExists";
    }
    return "?";
}

namespace {

void check_sizes(const SignallingSystem& system, const PartialOrder& order)
{
    if (order.size() != system.size())
        throw InvalidInput("order has " + std::to_string(order.size()) + " states, system has " +
                           std::to_string(system.size()));
}

ConditionCheck cone_check(const Cone& cone, const Eigen::VectorXd& d, std::string witness)
{
    const auto m = cone_contains(cone, d);
    return {std::move(witness), m.contains, m.contains ? 0.0 : -m.residual};
}

// Worst check decides witness and margin.
void aggregate(ConditionResult& result)
{
    result.pass = true;
    const ConditionCheck* worst = nullptr;
    for (const auto& c : result.checks) {
        result.pass = result.pass && c.pass;
        if (!worst || c.margin < worst->margin)
            worst = &c;
    }
    if (worst) {
        result.witness = worst->witness;
        result.margin = worst->margin;
    }
}

} // namespace

ConditionResult check_condition_a(const SignallingSystem& system, const PartialOrder& order,
                                  double tol)
{
    check_sizes(system, order);
    const Cone cone = make_cone(order, tol);
    ConditionResult result;
    result.name = "a";
    for (std::size_t g = 0; g < system.size(); ++g) {
        const auto j = static_cast<Eigen::Index>(g);
        const Eigen::VectorXd d = system.gA.col(j) - system.gB.col(j);
        result.checks.push_back(
            cone_check(cone, d, "G_B sigma(" + system.spins.label(g) + ") < G_A sigma(" +
                                    system.spins.label(g) + ")"));
    }
    aggregate(result);
    return result;
}

ConditionResult check_condition_b(const SignallingSystem& system, const PartialOrder& order)
{
    check_sizes(system, order);
    ConditionResult result;
    result.name = "b";
    for (auto [lo, hi] : order.covering_pairs()) {
        const double gap = system.alpha(static_cast<Eigen::Index>(hi)) -
                           system.alpha(static_cast<Eigen::Index>(lo));
        result.checks.push_back({"alpha(" + system.spins.label(lo) + ") < alpha(" +
                                     system.spins.label(hi) + ")",
                                 gap > 0.0, gap});
    }
    aggregate(result);
    return result;
}

ConditionResult check_condition_c(const SignallingSystem& system, const PartialOrder& order,
                                  double tol)
{
    check_sizes(system, order);
    const Cone cone = make_cone(order, tol);
    ConditionResult result;
    result.name = "c";
    for (auto [lo, hi] : order.covering_pairs()) {
        const auto l = static_cast<Eigen::Index>(lo);
        const auto h = static_cast<Eigen::Index>(hi);
        const std::string pair = system.spins.label(lo) + " < " + system.spins.label(hi);
        result.checks.push_back(
            cone_check(cone, system.gA.col(h) - system.gA.col(l), "G_A on " + pair));
        result.checks.push_back(
            cone_check(cone, system.gB.col(h) - system.gB.col(l), "G_B on " + pair));
    }
    aggregate(result);
    return result;
}

MonotonicityReport certify(const SignallingSystem& system, const PartialOrder& order)
{
    require_valid(system);
    MonotonicityReport report;
    report.order = order;
    report.orders_examined = 1;
    report.conditions = {check_condition_a(system, order), check_condition_b(system, order),
                         check_condition_c(system, order)};
    const bool all = std::all_of(report.conditions.begin(), report.conditions.end(),
                                 [](const auto& c) { return c.pass; });
    report.verdict = all ? Verdict::CertifiedMonotone : Verdict::NotCertified;
    report.note = all ? "conditions (a), (b), (c) hold; they are sufficient for monotonicity, "
                        "not necessary"
                      : "at least one sufficient condition fails; this alone does not prove the "
                        "flow is non-monotone";
    return report;
}

MonotonicityReport find_order(const SignallingSystem& system, std::size_t max_states)
{
    require_valid(system);
    const auto orders = enumerate_orders(system, max_states);
    std::vector<char> certified(orders.size(), 0);
    parallel_for(orders.size(), [&](std::size_t i) {
        if (!orders[i].empty())
            certified[i] = certify(system, orders[i]).verdict == Verdict::CertifiedMonotone;
    });

    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (certified[i]) {
            auto report = certify(system, orders[i]);
            report.orders_examined = orders.size();
            return report;
        }
    }
    MonotonicityReport report;
    report.verdict = Verdict::NoOrderExists;
    report.orders_examined = orders.size();
    report.note = "no nontrivial alpha-consistent order satisfies the sufficient conditions; "
                  "this does not prove the flow is non-monotone";
    return report;
}

TypeCResult type_c_sampled(const SignallingSystem& system, const PartialOrder& order,
                           std::size_t sample_count, std::uint64_t seed, double tol)
{
    require_valid(system);
    check_sizes(system, order);
    if (sample_count == 0)
        throw InvalidParameter("type_c_sampled needs at least one sample");

    const Eigen::MatrixXd E = hasse_edges(order).vectors;
    const auto m = E.cols();
    const auto K = static_cast<Eigen::Index>(system.size());

    // One cone per generator: [E | -e_k] leaves the coefficient of e_k free.
    std::vector<Cone> cones;
    for (Eigen::Index k = 0; k < m; ++k) {
        Cone cone{Eigen::MatrixXd(K, m + 1), tol};
        cone.generators << E, -E.col(k);
        cones.push_back(std::move(cone));
    }

    Rng rng(seed);
    TypeCResult result;
    for (std::size_t s = 0; s < sample_count; ++s) {
        const Eigen::VectorXd n = sample_interior(rng, system.size(), kInteriorMin);
        ++result.samples_checked;
        for (Eigen::Index k = 0; k < m; ++k) {
            const Eigen::VectorXd dir = directional_derivative(system, n, E.col(k));
            const auto membership = cone_contains(cones[static_cast<std::size_t>(k)], dir);
            if (!membership.contains) {
                result.pass = false;
                result.point = n;
                result.generator = static_cast<std::size_t>(k);
                result.derivative = dir;
                result.residual = membership.residual;
                return result;
            }
        }
    }
    return result;
}

} // namespace monosig
