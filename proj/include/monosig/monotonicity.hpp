#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monosig/order.hpp"
#include "monosig/system.hpp"

namespace monosig {

/// One elementary test inside a condition (a spin, or a covering pair
/// under one of the two transition matrices).
struct ConditionCheck {
    std::string witness;
    bool pass = true;
    double margin = 0.0;
};

/// Aggregate result of one sufficient condition.
///
/// Margins: for the alpha condition the smallest alpha gap over covering
/// pairs (must be > 0); for the cone conditions minus the LP residual of
/// the worst check (0 when every difference is certified).
struct ConditionResult {
    std::string name;
    bool pass = true;
    std::string witness;            ///< worst check, empty if there were none
    std::optional<double> margin;   ///< empty if there were no checks
    std::vector<ConditionCheck> checks;
};

enum class Verdict { CertifiedMonotone, NotCertified, NoOrderExists };
const char* to_string(Verdict v);

struct MonotonicityReport {
    Verdict verdict = Verdict::NotCertified;
    std::optional<PartialOrder> order;
    std::vector<ConditionResult> conditions;
    std::size_t orders_examined = 0;
    std::string note;
};

/// (a) G_B sigma(g) precedes G_A sigma(g) for every spin g.
ConditionResult check_condition_a(const SignallingSystem& system, const PartialOrder& order,
                                  double tol = kConeTol);
/// (b) alpha strictly increases along every covering pair.
ConditionResult check_condition_b(const SignallingSystem& system, const PartialOrder& order);
/// (c) G_A and G_B both map covering pairs to ordered pairs.
ConditionResult check_condition_c(const SignallingSystem& system, const PartialOrder& order,
                                  double tol = kConeTol);

/// CertifiedMonotone iff (a), (b) and (c) all hold. The conditions are
/// sufficient, not necessary.
MonotonicityReport certify(const SignallingSystem& system, const PartialOrder& order);

/// Certifies every alpha-consistent order (see enumerate_orders) and
/// returns the first nontrivial certified one, else NoOrderExists.
MonotonicityReport find_order(const SignallingSystem& system, std::size_t max_states = 6);

struct TypeCResult {
    bool pass = true;
    std::size_t samples_checked = 0;
    // Witness, set when pass == false.
    std::optional<Eigen::VectorXd> point;
    std::size_t generator = 0;
    std::optional<Eigen::VectorXd> derivative;
    double residual = 0.0;
};

inline constexpr double kInteriorMin = 1e-3;

/// Sampled falsifier for the directional-derivative form of the monotonicity
/// criterion: at each sampled interior macrostate n and generator e_k,
/// d/de f(n + e e_k) must be representable as sum_i b_i e_i with b_i >= 0
/// for all i != k (b_k free).
TypeCResult type_c_sampled(const SignallingSystem& system, const PartialOrder& order,
                           std::size_t sample_count, std::uint64_t seed,
                           double tol = kConeTol);

} // namespace monosig
