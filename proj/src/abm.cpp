#include "monosig/abm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>

#include "monosig/errors.hpp"
#include "monosig/parallel.hpp"

namespace monosig {

Graph Graph::complete(std::size_t n)
{
    if (n < 2)
        throw InvalidParameter("a population needs at least 2 agents");
    if (n > std::numeric_limits<Node>::max())
        throw CapacityError("too many agents");
    Graph g;
    g.n_ = n;
    g.complete_ = true;
    return g;
}

Graph Graph::from_edges(std::size_t n, EdgeList edges)
{
    if (n < 2)
        throw InvalidParameter("a population needs at least 2 agents");
    if (n > std::numeric_limits<Node>::max())
        throw CapacityError("too many agents");
    std::set<std::pair<Node, Node>> seen;
    for (auto& [a, b] : edges) {
        if (a >= n || b >= n)
            throw InvalidInput("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                               ") references a node outside [0, " + std::to_string(n) + ")");
        if (a == b)
            throw InvalidInput("self-loop at node " + std::to_string(a));
        if (!seen.emplace(std::min(a, b), std::max(a, b)).second)
            throw InvalidInput("duplicate edge (" + std::to_string(a) + ", " + std::to_string(b) +
                               ")");
    }

    Graph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    g.offsets_.assign(n + 1, 0);
    for (auto [a, b] : g.edges_) {
        ++g.offsets_[a + 1];
        ++g.offsets_[b + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.adjacency_.resize(2 * g.edges_.size());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [a, b] : g.edges_) {
        g.adjacency_[fill[a]++] = b;
        g.adjacency_[fill[b]++] = a;
    }
    return g;
}

std::size_t Graph::edge_count() const
{
    return complete_ ? n_ * (n_ - 1) / 2 : edges_.size();
}

std::span<const Graph::Node> Graph::neighbors(Node v) const
{
    if (complete_)
        throw InvalidInput("neighbour lists are not stored for the complete graph");
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::size_t Graph::degree(Node v) const
{
    return complete_ ? n_ - 1 : offsets_[v + 1] - offsets_[v];
}

std::size_t Graph::component_count() const
{
    if (complete_)
        return 1;
    std::vector<Node> parent(n_);
    std::iota(parent.begin(), parent.end(), Node{0});
    auto find = [&](Node x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t components = n_;
    for (auto [a, b] : edges_) {
        const Node ra = find(a), rb = find(b);
        if (ra != rb) {
            parent[ra] = rb;
            --components;
        }
    }
    return components;
}

Graph make_er_graph(std::size_t n, double mean_degree, std::uint64_t seed)
{
    if (n < 2)
        throw InvalidParameter("a population needs at least 2 agents");
    if (!(mean_degree >= 0.0) || !(mean_degree < static_cast<double>(n - 1)))
        throw InvalidParameter("mean degree must lie in [0, N - 1)");
    const double p = mean_degree / static_cast<double>(n - 1);
    Graph::EdgeList edges;
    if (p > 0.0) {
        // Batagelj-Brandes: skip over non-edges of the lower triangle.
        Rng rng(seed);
        const double log_q = std::log1p(-p);
        long long v = 1, w = -1;
        const auto N = static_cast<long long>(n);
        while (v < N) {
            const double r = rng.uniform();
            w += 1 + static_cast<long long>(std::floor(std::log1p(-r) / log_q));
            while (w >= v && v < N) {
                w -= v;
                ++v;
            }
            if (v < N)
                edges.emplace_back(static_cast<Graph::Node>(v), static_cast<Graph::Node>(w));
        }
    }
    return Graph::from_edges(n, std::move(edges));
}

const char* to_string(Selection s)
{
    return s == Selection::EdgeFirst ? "edge_first" : "speaker_first";
}

AgentPopulation make_population(std::shared_ptr<const Graph> graph, const Macrostate& n0,
                                std::uint64_t seed)
{
    if (!graph)
        throw InvalidInput("population needs a graph");
    require_macrostate(n0, "initial macrostate");
    const std::size_t N = graph->node_count();
    const auto K = static_cast<std::size_t>(n0.size());

    // Largest remainder rounding of N n0.
    std::vector<std::size_t> counts(K);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < K; ++i) {
        const double exact = static_cast<double>(N) * n0(static_cast<Eigen::Index>(i));
        counts[i] = static_cast<std::size_t>(std::floor(exact));
        assigned += counts[i];
        remainders.emplace_back(-(exact - std::floor(exact)), i);
    }
    std::sort(remainders.begin(), remainders.end());
    for (std::size_t r = 0; assigned < N; ++r, ++assigned)
        ++counts[remainders[r % K].second];

    AgentPopulation pop;
    pop.graph = std::move(graph);
    pop.seed = seed;
    pop.spins.reserve(N);
    for (std::size_t i = 0; i < K; ++i)
        pop.spins.insert(pop.spins.end(), counts[i], static_cast<std::uint32_t>(i));

    Rng rng(derive_seed(seed, 0x706c616365ULL));
    for (std::size_t i = N - 1; i > 0; --i)
        std::swap(pop.spins[i], pop.spins[rng.below(i + 1)]);
    return pop;
}

namespace {

void check_population(const AgentPopulation& pop, std::size_t K)
{
    if (!pop.graph)
        throw InvalidInput("population has no graph");
    if (pop.spins.size() != pop.graph->node_count())
        throw InvalidInput("population size does not match the graph");
    for (auto s : pop.spins)
        if (s >= K)
            throw InvalidInput("spin index " + std::to_string(s) + " out of range");
}

// Cumulative transition columns for inverse-CDF sampling.
class Sampler {
public:
    explicit Sampler(const SignallingSystem& system)
        : K_(system.size()), alpha_(system.alpha), cdf_a_(cumulative(system.gA)),
          cdf_b_(cumulative(system.gB))
    {
    }

    std::uint32_t listen(std::uint32_t listener, std::uint32_t speaker, Rng& rng) const
    {
        const bool says_a = rng.bernoulli(alpha_(speaker));
        const auto& cdf = says_a ? cdf_a_ : cdf_b_;
        const double u = rng.uniform();
        const double* col = cdf.data() + listener * K_;
        for (std::size_t i = 0; i < K_; ++i)
            if (u < col[i])
                return static_cast<std::uint32_t>(i);
        // Rounding left the cumulative sum just below 1: last reachable state.
        for (std::size_t i = K_; i-- > 0;)
            if (col[i] > (i ? col[i - 1] : 0.0))
                return static_cast<std::uint32_t>(i);
        return listener;
    }

private:
    static std::vector<double> cumulative(const Eigen::MatrixXd& g)
    {
        std::vector<double> out(static_cast<std::size_t>(g.size()));
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            double acc = 0.0;
            for (Eigen::Index i = 0; i < g.rows(); ++i) {
                acc += g(i, j);
                out[static_cast<std::size_t>(j * g.rows() + i)] = acc;
            }
        }
        return out;
    }

    std::size_t K_;
    Eigen::VectorXd alpha_;
    std::vector<double> cdf_a_, cdf_b_;
};

StepOutcome step_with(AgentPopulation& pop, const Sampler& sampler, Rng& rng,
                      Selection selection)
{
    const Graph& g = *pop.graph;
    std::uint32_t speaker = 0, listener = 0;
    if (g.is_complete()) {
        const auto N = g.node_count();
        listener = static_cast<std::uint32_t>(rng.below(N));
        speaker = static_cast<std::uint32_t>(rng.below(N - 1));
        if (speaker >= listener)
            ++speaker;
    } else if (selection == Selection::EdgeFirst) {
        if (g.edges().empty())
            return {};
        const auto [a, b] = g.edges()[rng.below(g.edges().size())];
        if (rng.below(2) == 0) {
            speaker = a;
            listener = b;
        } else {
            speaker = b;
            listener = a;
        }
    } else {
        speaker = static_cast<std::uint32_t>(rng.below(g.node_count()));
        const auto nb = g.neighbors(speaker);
        if (nb.empty())
            return {};
        listener = nb[rng.below(nb.size())];
    }

    StepOutcome out;
    out.interacted = true;
    out.listener = listener;
    out.from = pop.spins[listener];
    out.to = sampler.listen(out.from, pop.spins[speaker], rng);
    out.changed = out.to != out.from;
    pop.spins[listener] = out.to;
    return out;
}

Eigen::VectorXd complete_links(const Eigen::VectorXd& counts, std::size_t N)
{
    const auto K = static_cast<std::size_t>(counts.size());
    Eigen::VectorXd l(static_cast<Eigen::Index>(link_count(K)));
    const double pairs = 0.5 * static_cast<double>(N) * static_cast<double>(N - 1);
    for (std::size_t i = 0; i < K; ++i) {
        const double ci = counts(static_cast<Eigen::Index>(i));
        for (std::size_t j = i; j < K; ++j) {
            const double cj = counts(static_cast<Eigen::Index>(j));
            const double c = i == j ? 0.5 * ci * (ci - 1.0) : ci * cj;
            l(static_cast<Eigen::Index>(link_index(K, i, j))) = c / pairs;
        }
    }
    return l;
}

} // namespace

StepOutcome step(AgentPopulation& pop, const SignallingSystem& system, Rng& rng,
                 Selection selection)
{
    check_population(pop, system.size());
    return step_with(pop, Sampler(system), rng, selection);
}

Macrostate node_macrostate(const AgentPopulation& pop, std::size_t K)
{
    check_population(pop, K);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K));
    for (auto s : pop.spins)
        counts(s) += 1.0;
    return counts / static_cast<double>(pop.spins.size());
}

LinkMacrostate link_macrostate(const AgentPopulation& pop, std::size_t K)
{
    check_population(pop, K);
    const Graph& g = *pop.graph;
    if (g.is_complete()) {
        Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K));
        for (auto s : pop.spins)
            counts(s) += 1.0;
        return complete_links(counts, g.node_count());
    }
    Eigen::VectorXd l = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(link_count(K)));
    if (g.edges().empty())
        throw InvalidInput("link macrostate of a graph without edges");
    for (auto [a, b] : g.edges())
        l(static_cast<Eigen::Index>(link_index(K, pop.spins[a], pop.spins[b]))) += 1.0;
    return l / static_cast<double>(g.edges().size());
}

RunResult run(AgentPopulation pop, const SignallingSystem& system, const RunOptions& options)
{
    require_valid(system);
    const auto K = system.size();
    check_population(pop, K);
    if (!(options.t_end >= 0.0))
        throw InvalidParameter("t_end must be non-negative");
    if (!(options.record_every > 0.0))
        throw InvalidParameter("record interval must be positive");

    const Graph& g = *pop.graph;
    const auto N = g.node_count();
    const double inv_n = 1.0 / static_cast<double>(N);
    const auto total = static_cast<std::uint64_t>(std::llround(options.t_end * N));
    const auto stride = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::llround(options.record_every * N)));
    const bool links = options.record_links && !(g.edges().empty() && !g.is_complete());

    Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K));
    for (auto s : pop.spins)
        counts(s) += 1.0;
    Eigen::VectorXd link_counts;
    if (links && !g.is_complete())
        link_counts = link_macrostate(pop, K) * static_cast<double>(g.edges().size());

    RunResult result;
    if (links)
        result.links.emplace();
    auto record = [&](std::uint64_t s) {
        const double t = static_cast<double>(s) * inv_n;
        result.nodes.times.push_back(t);
        result.nodes.states.push_back(counts * inv_n);
        if (links) {
            result.links->times.push_back(t);
            result.links->states.push_back(
                g.is_complete() ? complete_links(counts, N)
                                : Eigen::VectorXd(link_counts /
                                                  static_cast<double>(g.edges().size())));
        }
    };

    const Sampler sampler(system);
    Rng rng(pop.seed);
    record(0);
    for (std::uint64_t s = 1; s <= total; ++s) {
        const auto out = step_with(pop, sampler, rng, options.selection);
        if (out.changed) {
            counts(out.from) -= 1.0;
            counts(out.to) += 1.0;
            if (links && !g.is_complete()) {
                for (auto w : g.neighbors(out.listener)) {
                    const auto sw = pop.spins[w];
                    link_counts(static_cast<Eigen::Index>(link_index(K, out.from, sw))) -= 1.0;
                    link_counts(static_cast<Eigen::Index>(link_index(K, out.to, sw))) += 1.0;
                }
            }
        }
        if (s % stride == 0 || s == total)
            record(s);
    }
    result.steps = total;
    return result;
}

EnsembleStats ensemble(const SignallingSystem& system, const EnsembleConfig& config,
                       std::size_t runs)
{
    if (runs == 0)
        throw InvalidParameter("an ensemble needs at least one run");
    require_valid(system);
    std::vector<RunResult> results(runs);
    parallel_for(runs, [&](std::size_t r) {
        const auto seed = derive_seed(config.seed, r);
        results[r] = run(make_population(config.graph, config.n0, seed), system, config.run);
    });

    EnsembleStats stats;
    stats.runs = runs;
    stats.times = results.front().nodes.times;
    const std::size_t T = stats.times.size();
    const double R = static_cast<double>(runs);
    for (std::size_t t = 0; t < T; ++t) {
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(results.front().nodes.states[t].size());
        Eigen::VectorXd sq = sum;
        for (const auto& res : results) {
            sum += res.nodes.states[t];
            sq += res.nodes.states[t].cwiseAbs2();
        }
        const Eigen::VectorXd mean = sum / R;
        Eigen::VectorXd se = Eigen::VectorXd::Zero(mean.size());
        if (runs > 1) {
            const Eigen::VectorXd var = ((sq - R * mean.cwiseAbs2()) / (R - 1.0)).cwiseMax(0.0);
            se = (var / R).cwiseSqrt();
        }
        stats.mean.push_back(mean);
        stats.std_error.push_back(se);
    }
    if (results.front().links) {
        stats.link_mean.emplace();
        for (std::size_t t = 0; t < T; ++t) {
            Eigen::VectorXd sum = Eigen::VectorXd::Zero(results.front().links->states[t].size());
            for (const auto& res : results)
                sum += res.links->states[t];
            stats.link_mean->push_back(sum / R);
        }
    }
    return stats;
}

Deviation compare(const std::vector<double>& times, const std::vector<Eigen::VectorXd>& mean,
                  const Trajectory& reference, double t_max)
{
    if (times.size() != mean.size())
        throw InvalidInput("times and states differ in length");
    Deviation dev;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] > t_max + 1e-12)
            continue;
        const Eigen::VectorXd ref = reference.at(times[i]);
        if (ref.size() != mean[i].size())
            throw InvalidInput("reference trajectory has the wrong dimension");
        Eigen::Index c = 0;
        const double d = (mean[i] - ref).cwiseAbs().maxCoeff(&c);
        if (d > dev.sup) {
            dev.sup = d;
            dev.time = times[i];
            dev.component = static_cast<std::size_t>(c);
        }
    }
    return dev;
}

Deviation compare(const EnsembleStats& stats, const Trajectory& reference, double t_max)
{
    return compare(stats.times, stats.mean, reference, t_max);
}

double chi_square_sf(double x, int dof)
{
    if (dof < 1)
        throw InvalidParameter("chi-square needs at least one degree of freedom");
    if (x <= 0.0)
        return 1.0;
    const double h = 0.5 * x;
    if (dof % 2 == 0) {
        double term = 1.0, sum = 1.0;
        for (int i = 1; i < dof / 2; ++i) {
            term *= h / i;
            sum += term;
        }
        return std::exp(-h) * sum;
    }
    double sum = 0.0;
    double term = std::sqrt(h) / (0.5 * std::sqrt(std::numbers::pi));  // h^(1/2) / Gamma(3/2)
    for (int i = 1; i <= (dof - 1) / 2; ++i) {
        sum += term;
        term *= h / (i + 0.5);
    }
    return std::erfc(std::sqrt(h)) + std::exp(-h) * sum;
}

} // namespace monosig
