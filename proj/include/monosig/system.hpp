#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "monosig/errors.hpp"

namespace monosig {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Population fractions per spin state; a point of the (K-1)-simplex.
using Macrostate = Eigen::VectorXd;
/// Population fractions per unordered spin pair, canonical (i <= j) order.
using LinkMacrostate = Eigen::VectorXd;
/// Symmetric K x K encoding of a link macrostate (see pair_matrix()).
using PairMatrix = Eigen::MatrixXd;

inline constexpr double kStochasticTol = 1e-12;
inline constexpr double kSimplexTol = 1e-10;

/// Ordered, unique, nonempty spin-state labels.
class SpinSpace {
public:
    SpinSpace() = default;
    explicit SpinSpace(std::vector<std::string> labels);

    std::size_t size() const { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }
    std::optional<std::size_t> find(const std::string& label) const;
    /// Throws InvalidParameter if the label is unknown.
    std::size_t index_of(const std::string& label) const;

    friend bool operator==(const SpinSpace&, const SpinSpace&) = default;

private:
    std::vector<std::string> labels_;
};

/// Binary signalling system. Transition matrices are column-stochastic:
/// entry (i, j) is the probability that a listener in state j moves to
/// state i on receiving the message.
template <typename Scalar>
struct BasicSignallingSystem {
    SpinSpace spins;
    Vector<Scalar> alpha;  ///< probability of sending "A", per speaker state
    Matrix<Scalar> gA;
    Matrix<Scalar> gB;
    std::vector<std::size_t> committed;  ///< states with identity columns

    std::size_t size() const { return spins.size(); }

    bool is_committed(std::size_t i) const
    {
        for (auto c : committed)
            if (c == i)
                return true;
        return false;
    }

    template <typename Other>
    BasicSignallingSystem<Other> cast() const
    {
        return {spins, alpha.template cast<Other>(), gA.template cast<Other>(),
                gB.template cast<Other>(), committed};
    }
};

using SignallingSystem = BasicSignallingSystem<double>;

struct Violation {
    std::string kind;  ///< "dimension", "alpha", "gA-entry", "gA-column", ...
    std::size_t index = 0;
    double residual = 0.0;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate(const SignallingSystem& system);
/// Throws InvalidInput listing the first violations when the system is invalid.
void require_valid(const SignallingSystem& system);

// --- builders -------------------------------------------------------------

/// Listener-only Naming Game on (A, AB, B).
SignallingSystem make_long();
/// K-state generalisation with labels "0".."K" and alpha_i = i/K.
SignallingSystem make_kng(int K);
/// LO-NG with G_B replaced so that A jumps straight to B; admits no
/// certified order.
SignallingSystem make_counterexample();

struct CommittedSpec {
    std::string base;  ///< existing state the committed agents hold
    double alpha = 0.0;
};

/// Appends one committed state "C_<base>" per entry. Committed states never
/// change and nothing transitions into them.
SignallingSystem with_committed(const SignallingSystem& system,
                                const std::vector<CommittedSpec>& specs);

// --- macrostates ----------------------------------------------------------

/// Vertex sigma(i) of the simplex.
Eigen::VectorXd pure_state(std::size_t K, std::size_t i);
bool is_macrostate(const Eigen::Ref<const Eigen::VectorXd>& n, double tol = kSimplexTol);
void require_macrostate(const Eigen::Ref<const Eigen::VectorXd>& n, const char* what = "macrostate",
                        double tol = kSimplexTol);

// --- link types -----------------------------------------------------------

constexpr std::size_t link_count(std::size_t K) { return K * (K + 1) / 2; }
/// Index of the unordered pair {i, j} in lexicographic (i <= j) order.
std::size_t link_index(std::size_t K, std::size_t i, std::size_t j);
std::pair<std::size_t, std::size_t> link_pair(std::size_t K, std::size_t link);
/// Infers K from L = K(K+1)/2; throws InvalidInput otherwise.
std::size_t spin_count_for_links(std::size_t L);
/// "X-Y" labels in canonical order.
std::vector<std::string> link_labels(const SpinSpace& spins);

/// M_ii = l_ii, M_ij = M_ji = l_ij / 2.
PairMatrix pair_matrix(const Eigen::Ref<const LinkMacrostate>& l);
/// Inverse of pair_matrix().
LinkMacrostate link_state(const Eigen::Ref<const PairMatrix>& m);
/// Row sums of the pair matrix.
Macrostate node_marginal(const Eigen::Ref<const PairMatrix>& m);
/// Link state of uncorrelated endpoints, M = n n^T.
LinkMacrostate product_link_state(const Eigen::Ref<const Macrostate>& n);

} // namespace monosig
