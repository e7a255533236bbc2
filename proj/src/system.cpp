#include "monosig/system.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace monosig {

SpinSpace::SpinSpace(std::vector<std::string> labels) : labels_(std::move(labels))
{
    if (labels_.empty())
        throw InvalidParameter("spin space needs at least one state");
    std::set<std::string> seen;
    for (const auto& l : labels_) {
        if (l.empty())
            throw InvalidParameter("spin labels must be nonempty");
        if (!seen.insert(l).second)
            throw InvalidParameter("duplicate spin label '" + l + "'");
    }
}

std::optional<std::size_t> SpinSpace::find(const std::string& label) const
{
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t SpinSpace::index_of(const std::string& label) const
{
    if (auto i = find(label))
        return *i;
    throw InvalidParameter("unknown spin state '" + label + "'");
}

namespace {

void check_transition(const Eigen::MatrixXd& g, const std::string& name, const SpinSpace& spins,
                      std::vector<Violation>& out)
{
    const auto K = spins.size();
    for (std::size_t j = 0; j < K; ++j) {
        for (std::size_t i = 0; i < K; ++i) {
            double v = g(i, j);
            if (!std::isfinite(v) || v < -kStochasticTol || v > 1.0 + kStochasticTol) {
                double r = std::isfinite(v) ? std::max(-v, v - 1.0) : INFINITY;
                out.push_back({name + "-entry", j, r,
                               name + "(" + spins.label(i) + ", " + spins.label(j) +
                                   ") outside [0, 1]"});
            }
        }
        double r = std::abs(g.col(j).sum() - 1.0);
        if (!(r <= kStochasticTol))
            out.push_back({name + "-column", j, r,
                           name + " column '" + spins.label(j) + "' does not sum to 1"});
    }
}

} // namespace

ValidationReport validate(const SignallingSystem& s)
{
    ValidationReport report;
    auto& out = report.violations;
    const auto K = s.size();
    if (K == 0) {
        out.push_back({"dimension", 0, 0.0, "empty spin space"});
        return report;
    }
    const auto k = static_cast<Eigen::Index>(K);
    auto dim = [&](const char* what, Eigen::Index rows, Eigen::Index cols, Eigen::Index want) {
        if (rows != k || cols != want) {
            std::ostringstream msg;
            msg << what << " has shape " << rows << "x" << cols << ", expected " << k << "x"
                << want;
            out.push_back({"dimension", 0, 0.0, msg.str()});
        }
    };
    dim("alpha", s.alpha.size(), 1, 1);
    dim("gA", s.gA.rows(), s.gA.cols(), k);
    dim("gB", s.gB.rows(), s.gB.cols(), k);
    if (!out.empty())
        return report;

    for (std::size_t i = 0; i < K; ++i) {
        double a = s.alpha(i);
        if (!std::isfinite(a) || a < 0.0 || a > 1.0) {
            double r = std::isfinite(a) ? std::max(-a, a - 1.0) : INFINITY;
            out.push_back({"alpha", i, r, "alpha of '" + s.spins.label(i) + "' outside [0, 1]"});
        }
    }
    check_transition(s.gA, "gA", s.spins, out);
    check_transition(s.gB, "gB", s.spins, out);

    for (auto c : s.committed) {
        if (c >= K) {
            out.push_back({"committed", c, 0.0, "committed index out of range"});
            continue;
        }
        Eigen::VectorXd unit = pure_state(K, c);
        double ra = (s.gA.col(c) - unit).cwiseAbs().maxCoeff();
        double rb = (s.gB.col(c) - unit).cwiseAbs().maxCoeff();
        if (ra > kStochasticTol || rb > kStochasticTol)
            out.push_back({"committed", c, std::max(ra, rb),
                           "committed state '" + s.spins.label(c) + "' has a non-identity column"});
    }
    return report;
}

void require_valid(const SignallingSystem& system)
{
    auto report = validate(system);
    if (report.ok())
        return;
    std::ostringstream msg;
    msg << "invalid signalling system:";
    for (const auto& v : report.violations)
        msg << "\n  " << v.message << " (residual " << v.residual << ")";
    throw InvalidInput(msg.str());
}

namespace {

// Column j of the result is the unit vector on target[j].
Eigen::MatrixXd deterministic(const std::vector<std::size_t>& target)
{
    const auto K = static_cast<Eigen::Index>(target.size());
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(K, K);
    for (Eigen::Index j = 0; j < K; ++j)
        g(static_cast<Eigen::Index>(target[j]), j) = 1.0;
    return g;
}

} // namespace

SignallingSystem make_long()
{
    SignallingSystem s;
    s.spins = SpinSpace({"A", "AB", "B"});
    s.alpha = Eigen::Vector3d(1.0, 0.5, 0.0);
    s.gA = deterministic({0, 0, 1});
    s.gB = deterministic({1, 2, 2});
    return s;
}

SignallingSystem make_kng(int K)
{
    if (K < 1)
        throw InvalidParameter("K-NG needs K >= 1, got " + std::to_string(K));
    const auto size = static_cast<std::size_t>(K) + 1;
    std::vector<std::string> labels;
    std::vector<std::size_t> up, down;
    SignallingSystem s;
    s.alpha.resize(static_cast<Eigen::Index>(size));
    for (std::size_t k = 0; k < size; ++k) {
        labels.push_back(std::to_string(k));
        s.alpha(static_cast<Eigen::Index>(k)) = static_cast<double>(k) / K;
        up.push_back(std::min(k + 1, size - 1));
        down.push_back(k == 0 ? 0 : k - 1);
    }
    s.spins = SpinSpace(std::move(labels));
    s.gA = deterministic(up);
    s.gB = deterministic(down);
    return s;
}

SignallingSystem make_counterexample()
{
    SignallingSystem s = make_long();
    s.gB = deterministic({2, 1, 2});
    return s;
}

SignallingSystem with_committed(const SignallingSystem& system,
                                const std::vector<CommittedSpec>& specs)
{
    const auto K = static_cast<Eigen::Index>(system.size());
    const auto extra = static_cast<Eigen::Index>(specs.size());
    auto labels = system.spins.labels();
    for (const auto& spec : specs) {
        system.spins.index_of(spec.base);
        if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0))
            throw InvalidParameter("committed alpha must lie in [0, 1]");
        labels.push_back("C_" + spec.base);
    }

    SignallingSystem out;
    out.spins = SpinSpace(std::move(labels));
    out.alpha.resize(K + extra);
    out.alpha.head(K) = system.alpha;
    out.gA = Eigen::MatrixXd::Zero(K + extra, K + extra);
    out.gB = Eigen::MatrixXd::Zero(K + extra, K + extra);
    out.gA.topLeftCorner(K, K) = system.gA;
    out.gB.topLeftCorner(K, K) = system.gB;
    out.committed = system.committed;
    for (Eigen::Index e = 0; e < extra; ++e) {
        const auto c = K + e;
        out.alpha(c) = specs[static_cast<std::size_t>(e)].alpha;
        out.gA(c, c) = 1.0;
        out.gB(c, c) = 1.0;
        out.committed.push_back(static_cast<std::size_t>(c));
    }
    return out;
}

Eigen::VectorXd pure_state(std::size_t K, std::size_t i)
{
    return Eigen::VectorXd::Unit(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(i));
}

bool is_macrostate(const Eigen::Ref<const Eigen::VectorXd>& n, double tol)
{
    if (n.size() == 0 || !n.allFinite())
        return false;
    return n.minCoeff() >= 0.0 && std::abs(n.sum() - 1.0) <= tol;
}

void require_macrostate(const Eigen::Ref<const Eigen::VectorXd>& n, const char* what, double tol)
{
    if (!is_macrostate(n, tol)) {
        std::ostringstream msg;
        msg << what << " is not on the simplex: " << n.transpose();
        throw InvalidInput(msg.str());
    }
}

std::size_t link_index(std::size_t K, std::size_t i, std::size_t j)
{
    if (i > j)
        std::swap(i, j);
    // rows 0..i-1 hold (K - r) pairs each
    return i * K - i * (i - 1) / 2 + (j - i);
}

std::pair<std::size_t, std::size_t> link_pair(std::size_t K, std::size_t link)
{
    std::size_t i = 0;
    while (link >= K - i) {
        link -= K - i;
        ++i;
    }
    return {i, i + link};
}

std::size_t spin_count_for_links(std::size_t L)
{
    std::size_t K = 0;
    while (link_count(K) < L)
        ++K;
    if (link_count(K) != L || K == 0)
        throw InvalidInput("link vector length " + std::to_string(L) +
                           " is not K(K+1)/2 for any K");
    return K;
}

std::vector<std::string> link_labels(const SpinSpace& spins)
{
    const auto K = spins.size();
    std::vector<std::string> out;
    out.reserve(link_count(K));
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i; j < K; ++j)
            out.push_back(spins.label(i) + "-" + spins.label(j));
    return out;
}

PairMatrix pair_matrix(const Eigen::Ref<const LinkMacrostate>& l)
{
    const auto K = spin_count_for_links(static_cast<std::size_t>(l.size()));
    PairMatrix m(K, K);
    for (std::size_t i = 0; i < K; ++i) {
        m(i, i) = l(link_index(K, i, i));
        for (std::size_t j = i + 1; j < K; ++j)
            m(i, j) = m(j, i) = 0.5 * l(link_index(K, i, j));
    }
    return m;
}

LinkMacrostate link_state(const Eigen::Ref<const PairMatrix>& m)
{
    const auto K = static_cast<std::size_t>(m.rows());
    LinkMacrostate l(link_count(K));
    for (std::size_t i = 0; i < K; ++i) {
        l(link_index(K, i, i)) = m(i, i);
        for (std::size_t j = i + 1; j < K; ++j)
            l(link_index(K, i, j)) = m(i, j) + m(j, i);
    }
    return l;
}

Macrostate node_marginal(const Eigen::Ref<const PairMatrix>& m) { return m.rowwise().sum(); }

LinkMacrostate product_link_state(const Eigen::Ref<const Macrostate>& n)
{
    return link_state(n * n.transpose());
}

} // namespace monosig
