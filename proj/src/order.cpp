#include "monosig/order.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>

#include "monosig/linear_program.hpp"

namespace monosig {

PartialOrder::PartialOrder(std::size_t size)
    : size_(size), rel_(Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
                       static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size), false))
{
}

PartialOrder PartialOrder::from_edges(std::size_t size, const std::vector<Edge>& edges)
{
    PartialOrder order(size);
    for (auto [lo, hi] : edges) {
        if (lo >= size || hi >= size)
            throw InvalidInput("order edge index out of range");
        if (lo == hi)
            throw InvalidInput("order edge is a self-loop");
        order.rel_(lo, hi) = true;
    }
    // Warshall closure
    for (std::size_t k = 0; k < size; ++k)
        for (std::size_t i = 0; i < size; ++i)
            if (order.rel_(i, k))
                for (std::size_t j = 0; j < size; ++j)
                    if (order.rel_(k, j))
                        order.rel_(i, j) = true;
    for (std::size_t i = 0; i < size; ++i)
        if (order.rel_(i, i))
            throw InvalidInput("order edges contain a cycle");
    return order;
}

PartialOrder PartialOrder::chain(std::size_t size, const std::vector<std::size_t>& ranking)
{
    std::vector<Edge> edges;
    for (std::size_t k = 1; k < ranking.size(); ++k)
        edges.emplace_back(ranking[k - 1], ranking[k]);
    return from_edges(size, edges);
}

std::size_t PartialOrder::relation_size() const
{
    return static_cast<std::size_t>(rel_.count());
}

std::vector<Edge> PartialOrder::relation() const
{
    std::vector<Edge> out;
    for (std::size_t i = 0; i < size_; ++i)
        for (std::size_t j = 0; j < size_; ++j)
            if (rel_(i, j))
                out.emplace_back(i, j);
    return out;
}

std::vector<Edge> PartialOrder::covering_pairs() const
{
    std::vector<Edge> out;
    for (auto [i, j] : relation()) {
        bool covered = true;
        for (std::size_t k = 0; k < size_ && covered; ++k)
            if (rel_(i, k) && rel_(k, j))
                covered = false;
        if (covered)
            out.emplace_back(i, j);
    }
    return out;
}

PartialOrder PartialOrder::extended(std::size_t new_size) const
{
    if (new_size < size_)
        throw InvalidParameter("cannot shrink a partial order");
    return from_edges(new_size, covering_pairs());
}

std::string describe(const PartialOrder& order, const std::vector<std::string>& labels)
{
    const auto cover = order.covering_pairs();
    if (cover.empty())
        return "(trivial order)";

    // A chain through every element that takes part in the order.
    std::vector<std::size_t> ranks;
    for (std::size_t i = 0; i < order.size(); ++i) {
        bool involved = false;
        for (std::size_t j = 0; j < order.size(); ++j)
            involved = involved || order.comparable(i, j);
        if (involved)
            ranks.push_back(i);
    }
    bool is_chain = true;
    for (std::size_t a = 0; a < ranks.size() && is_chain; ++a)
        for (std::size_t b = a + 1; b < ranks.size(); ++b)
            if (!order.comparable(ranks[a], ranks[b]))
                is_chain = false;

    std::ostringstream out;
    if (is_chain) {
        std::sort(ranks.begin(), ranks.end(),
                  [&](std::size_t a, std::size_t b) { return order.less(a, b); });
        for (std::size_t k = 0; k < ranks.size(); ++k)
            out << (k ? " < " : "") << labels.at(ranks[k]);
        return out.str();
    }
    for (std::size_t k = 0; k < cover.size(); ++k)
        out << (k ? ", " : "") << labels.at(cover[k].first) << " < "
            << labels.at(cover[k].second);
    return out.str();
}

GeneratorSet hasse_edges(const PartialOrder& order)
{
    GeneratorSet set;
    set.edges = order.covering_pairs();
    const auto K = static_cast<Eigen::Index>(order.size());
    set.vectors = Eigen::MatrixXd::Zero(K, static_cast<Eigen::Index>(set.edges.size()));
    for (std::size_t c = 0; c < set.edges.size(); ++c) {
        const auto col = static_cast<Eigen::Index>(c);
        set.vectors(static_cast<Eigen::Index>(set.edges[c].second), col) += 1.0;
        set.vectors(static_cast<Eigen::Index>(set.edges[c].first), col) -= 1.0;
    }
    return set;
}

Cone make_cone(const PartialOrder& order, double tol)
{
    return Cone{hasse_edges(order).vectors, tol};
}

ConeMembership cone_contains(const Cone& cone, const Eigen::Ref<const Eigen::VectorXd>& d)
{
    if (d.size() != cone.generators.rows())
        throw InvalidInput("cone_contains: dimension mismatch");
    if (!d.allFinite())
        throw InvalidInput("cone_contains: non-finite direction");
    if (std::abs(d.sum()) > cone.tol)
        throw InvalidInput("cone_contains: direction is not in the tangent space (sum = " +
                           std::to_string(d.sum()) + ")");

    ConeMembership out;
    const Eigen::VectorXd rhs = d;
    auto result = simplex_feasibility(cone.generators, rhs, cone.tol);
    if (!result.feasible && cone.generators.cols() <= 8) {
        auto check = basis_enumeration_feasibility(cone.generators, rhs, cone.tol);
        if (check.feasible)
            result = std::move(check);
        else
            result.residual = std::min(result.residual, check.residual);
    }
    out.contains = result.feasible;
    out.residual = result.residual;
    if (result.feasible)
        out.certificate = std::move(result.x);
    return out;
}

const char* to_string(Relation r)
{
    switch (r) {
    case Relation::Less:
        return "Less";
    case Relation::Greater:
        return "Greater";
    case Relation::Equal:
        return "Equal";
    case Relation::Incomparable:
        return "Incomparable";
    }
    return "?";
}

Relation compare(const Cone& cone, const Eigen::Ref<const Eigen::VectorXd>& n,
                 const Eigen::Ref<const Eigen::VectorXd>& n2)
{
    const Eigen::VectorXd d = n2 - n;
    if (d.cwiseAbs().maxCoeff() <= kEqualityTol)
        return Relation::Equal;
    const bool up = cone_contains(cone, d).contains;
    const bool down = cone_contains(cone, -d).contains;
    if (up && down)
        return Relation::Equal;
    if (up)
        return Relation::Less;
    if (down)
        return Relation::Greater;
    return Relation::Incomparable;
}

Relation compare(const PartialOrder& order, const Eigen::Ref<const Eigen::VectorXd>& n,
                 const Eigen::Ref<const Eigen::VectorXd>& n2)
{
    return compare(make_cone(order), n, n2);
}

PartialOrder induced_link_order(const PartialOrder& node_order)
{
    const auto K = node_order.size();
    const auto L = link_count(K);
    auto le = [&](std::size_t a, std::size_t b) { return a == b || node_order.less(a, b); };
    std::vector<Edge> edges;
    for (std::size_t s = 0; s < L; ++s) {
        const auto [x, y] = link_pair(K, s);
        for (std::size_t t = 0; t < L; ++t) {
            if (s == t)
                continue;
            const auto [u, v] = link_pair(K, t);
            if ((le(x, u) && le(y, v)) || (le(x, v) && le(y, u)))
                edges.emplace_back(s, t);
        }
    }
    return PartialOrder::from_edges(L, edges);
}

std::vector<PartialOrder> enumerate_orders(const SignallingSystem& system, std::size_t max_states)
{
    const auto K = system.size();
    if (K > max_states)
        throw CapacityError("order enumeration is capped at " + std::to_string(max_states) +
                            " states (system has " + std::to_string(K) +
                            "); supply an explicit order instead");

    std::vector<Edge> candidates;
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j)
            if (system.alpha(static_cast<Eigen::Index>(i)) <
                system.alpha(static_cast<Eigen::Index>(j)))
                candidates.emplace_back(i, j);

    // Strictly increasing alpha keeps every closure acyclic and alpha-consistent.
    std::vector<PartialOrder> orders;
    std::set<std::vector<Edge>> seen;
    const std::uint64_t subsets = std::uint64_t{1} << candidates.size();
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        std::vector<Edge> edges;
        for (std::size_t c = 0; c < candidates.size(); ++c)
            if (mask & (std::uint64_t{1} << c))
                edges.push_back(candidates[c]);
        auto order = PartialOrder::from_edges(K, edges);
        if (seen.insert(order.relation()).second)
            orders.push_back(std::move(order));
    }
    std::stable_sort(orders.begin(), orders.end(), [](const auto& a, const auto& b) {
        return a.relation_size() < b.relation_size();
    });
    return orders;
}

} // namespace monosig
