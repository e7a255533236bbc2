#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "monosig/ode.hpp"
#include "monosig/order.hpp"
#include "monosig/random.hpp"
#include "monosig/system.hpp"

namespace monosig {

// --- complete-network drift ----------------------------------------------
//
//   p(n) = alpha^T n
//   f(n) = [p G_A + (1 - p) G_B - I] n
//   J(n) = p G_A + (1 - p) G_B - I + (G_A - G_B) n alpha^T
//
// Templated on the scalar so the same expressions serve double, long double
// or any Eigen-compatible number type.

template <typename Scalar, typename Derived>
Scalar message_prob(const BasicSignallingSystem<Scalar>& s, const Eigen::MatrixBase<Derived>& n)
{
    return s.alpha.dot(n);
}

/// Mean listener transition Q(n) = p G_A + (1 - p) G_B.
template <typename Scalar, typename Derived>
Matrix<Scalar> mean_transition(const BasicSignallingSystem<Scalar>& s,
                               const Eigen::MatrixBase<Derived>& n)
{
    const Scalar p = message_prob(s, n);
    return p * s.gA + (Scalar(1) - p) * s.gB;
}

template <typename Scalar, typename Derived>
Vector<Scalar> drift(const BasicSignallingSystem<Scalar>& s, const Eigen::MatrixBase<Derived>& n)
{
    const Scalar p = message_prob(s, n);
    return p * (s.gA * n) + (Scalar(1) - p) * (s.gB * n) - n;
}

template <typename Scalar, typename Derived>
Matrix<Scalar> jacobian(const BasicSignallingSystem<Scalar>& s, const Eigen::MatrixBase<Derived>& n)
{
    const auto K = static_cast<Eigen::Index>(s.size());
    Matrix<Scalar> J = mean_transition(s, n) - Matrix<Scalar>::Identity(K, K);
    J.noalias() += ((s.gA - s.gB) * n) * s.alpha.transpose();
    return J;
}

/// d/de f(n + e v) in closed form.
template <typename Scalar, typename DerivedN, typename DerivedV>
Vector<Scalar> directional_derivative(const BasicSignallingSystem<Scalar>& s,
                                      const Eigen::MatrixBase<DerivedN>& n,
                                      const Eigen::MatrixBase<DerivedV>& v)
{
    return mean_transition(s, n) * v - v + s.alpha.dot(v) * ((s.gA - s.gB) * n);
}

// --- integration ----------------------------------------------------------

/// Fixed-step integration of the complete-network mean-field ODE.
Trajectory integrate(const SignallingSystem& system, const Macrostate& n0, double t_end,
                     const IntegrationOptions& options = {});

// --- equilibria -----------------------------------------------------------

enum class Stability { Stable, Unstable, Saddle, Marginal };
const char* to_string(Stability s);

struct Equilibrium {
    Macrostate state;
    double residual = 0.0;  ///< ||f(state)||_inf
    Stability classification = Stability::Marginal;
    std::vector<std::complex<double>> eigenvalues;  ///< on the free tangent space
};

struct EquilibriumOptions {
    int grid_density = 10;
    /// Fixed fractions of committed states, keyed by state index. Committed
    /// states not listed are held at zero. Newton runs on the slice where
    /// all committed fractions are fixed.
    std::vector<std::pair<std::size_t, double>> committed_fractions;
    double residual_tol = 1e-10;
    double dedup_distance = 1e-6;
    double marginal_threshold = 1e-8;
    int max_newton_iterations = 100;
};

struct EquilibriumSearch {
    std::vector<Equilibrium> equilibria;  ///< sorted lexicographically by state, descending
    std::size_t seeds = 0;
    std::size_t dropped_seeds = 0;  ///< seeds whose Newton run did not converge
};

EquilibriumSearch find_equilibria(const SignallingSystem& system,
                                  const EquilibriumOptions& options = {});

/// Orthonormal basis (columns) of {v : 1^T v = 0, v_c = 0 for c in `fixed`}.
Eigen::MatrixXd tangent_basis(std::size_t K, const std::vector<std::size_t>& fixed = {});

/// Classification by real parts of the eigenvalues of P^T J P.
Stability classify(const std::vector<std::complex<double>>& eigenvalues, double threshold);

// --- committed-fraction sweep ---------------------------------------------

struct SweepOptions {
    double dt = 1e-3;
    double t_end = 200.0;
    double dominance_threshold = 0.9;
    /// Opinion the committed agents push; defaults to the uncommitted state
    /// sharing the committed state's alpha.
    std::optional<std::string> target;
    /// Consensus the population starts in; defaults to the uncommitted state
    /// whose alpha is farthest from the committed state's alpha.
    std::optional<std::string> opposing;
};

struct SweepPoint {
    double q = 0.0;
    bool dominant = false;       ///< target mass (incl. committed) above threshold
    double target_mass = 0.0;
    Macrostate terminal;
};

struct SweepResult {
    double qc = 0.0;
    double lo = 0.0;  ///< largest q seen without dominance
    double hi = 0.0;  ///< smallest q seen with dominance
    std::string target;
    std::string opposing;
    std::vector<SweepPoint> classifications;  ///< in evaluation order
};

/// Terminal state reached from the opposing consensus with committed
/// fraction q.
SweepPoint classify_committed_fraction(const SignallingSystem& system, std::size_t committed_state,
                                       double q, const SweepOptions& options = {});

/// Bisection on the committed fraction until hi - lo <= tol.
SweepResult sweep_committed(const SignallingSystem& system, std::size_t committed_state,
                            double q_low, double q_high, double tol,
                            const SweepOptions& options = {});

// --- order preservation ---------------------------------------------------

struct HarnessOptions {
    std::size_t pair_count = 100;
    double t_end = 50.0;
    std::size_t checkpoints = 20;
    std::uint64_t seed = 1;
    double dt = 1e-3;
    double tol = kConeTol;
};

struct OrderViolation {
    std::size_t pair = 0;
    double time = 0.0;
    double residual = 0.0;  ///< LP residual of phi_t(n') - phi_t(n)
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

/// Random ordered pair n < n' = n + s E lambda with lambda >= 0 and the
/// largest s <= 1 keeping n' on the simplex, scaled by a uniform factor.
std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_ordered_pair(const Eigen::MatrixXd& generators,
                                                                Rng& rng);

/// Maps an initial state to its trajectory recorded at the checkpoints.
using Flow = std::function<Trajectory(const Eigen::VectorXd&)>;

/// Shared harness: samples `pair_count` ordered pairs in the cone's ambient
/// simplex, runs both through `flow` and tests every recorded time t > 0.
std::vector<OrderViolation> check_order_preservation(const Cone& cone, const Flow& flow,
                                                     const HarnessOptions& options);

/// Integrates sampled ordered pairs and reports every checkpoint at which
/// phi_t(n') - phi_t(n) leaves the cone. Empty iff the order was preserved.
std::vector<OrderViolation> order_harness(const SignallingSystem& system,
                                          const PartialOrder& order,
                                          const HarnessOptions& options = {});

} // namespace monosig
