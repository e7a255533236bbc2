#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "monosig/system.hpp"

namespace monosig {

using Edge = std::pair<std::size_t, std::size_t>;  ///< (less, greater)

/// Strict partial order on {0, ..., size-1}, stored as its transitive closure.
class PartialOrder {
public:
    explicit PartialOrder(std::size_t size = 0);

    /// Transitive closure of the given (less, greater) pairs.
    /// Throws InvalidInput on self-loops, out-of-range indices or cycles.
    static PartialOrder from_edges(std::size_t size, const std::vector<Edge>& edges);
    /// Total order following `ranking` from least to greatest.
    static PartialOrder chain(std::size_t size, const std::vector<std::size_t>& ranking);

    std::size_t size() const { return size_; }
    bool less(std::size_t i, std::size_t j) const { return rel_(i, j); }
    bool comparable(std::size_t i, std::size_t j) const { return less(i, j) || less(j, i); }
    bool empty() const { return relation_size() == 0; }
    std::size_t relation_size() const;

    /// All strict pairs of the closure, row-major.
    std::vector<Edge> relation() const;
    /// Covering pairs (transitive reduction).
    std::vector<Edge> covering_pairs() const;
    /// Same order on a larger ground set; new elements are incomparable.
    PartialOrder extended(std::size_t new_size) const;

    bool operator==(const PartialOrder& other) const
    {
        return size_ == other.size_ && rel_ == other.rel_;
    }

private:
    std::size_t size_ = 0;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> rel_;
};

/// Human-readable form: "B < AB < A" for chains, otherwise covering pairs.
std::string describe(const PartialOrder& order, const std::vector<std::string>& labels);

/// Covering pairs with their difference vectors sigma(greater) - sigma(less).
struct GeneratorSet {
    std::vector<Edge> edges;
    Eigen::MatrixXd vectors;  ///< K x |B|, one generator per column
};

GeneratorSet hasse_edges(const PartialOrder& order);

inline constexpr double kConeTol = 1e-9;

/// Nonnegative span of the generator columns.
struct Cone {
    Eigen::MatrixXd generators;
    double tol = kConeTol;
};

Cone make_cone(const PartialOrder& order, double tol = kConeTol);

struct ConeMembership {
    bool contains = false;
    std::optional<Eigen::VectorXd> certificate;  ///< lambda >= 0 when contained
    double residual = 0.0;                       ///< ||E lambda - d||_inf
};

/// Decides d in C_+ by LP feasibility of E lambda = d, lambda >= 0.
/// Cones with at most 8 generators are cross-checked by basis enumeration
/// whenever the simplex reports infeasibility.
/// Throws InvalidInput if d is not a tangent vector (|1^T d| > tol).
ConeMembership cone_contains(const Cone& cone, const Eigen::Ref<const Eigen::VectorXd>& d);

enum class Relation { Less, Greater, Equal, Incomparable };

const char* to_string(Relation r);

inline constexpr double kEqualityTol = 1e-10;

/// Order relation between two macrostates under the cone of `order`.
Relation compare(const Cone& cone, const Eigen::Ref<const Eigen::VectorXd>& n,
                 const Eigen::Ref<const Eigen::VectorXd>& n2);
Relation compare(const PartialOrder& order, const Eigen::Ref<const Eigen::VectorXd>& n,
                 const Eigen::Ref<const Eigen::VectorXd>& n2);

/// Order on unordered spin pairs: {x, y} <= {x', y'} iff the endpoints can be
/// matched so that both matched pairs are ordered (or equal).
PartialOrder induced_link_order(const PartialOrder& node_order);

/// Every partial order whose comparable pairs all have strictly increasing
/// alpha, deduplicated and sorted by relation size (then discovery order).
/// Throws CapacityError if the system has more than `max_states` states.
std::vector<PartialOrder> enumerate_orders(const SignallingSystem& system,
                                           std::size_t max_states = 6);

} // namespace monosig
