#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "monosig/ode.hpp"
#include "monosig/random.hpp"
#include "monosig/system.hpp"

namespace monosig {

/// Undirected simple graph: either the complete graph on n nodes (stored
/// implicitly) or an explicit edge list with CSR adjacency.
class Graph {
public:
    using Node = std::uint32_t;
    using EdgeList = std::vector<std::pair<Node, Node>>;

    static Graph complete(std::size_t n);
    /// Throws InvalidInput on self-loops, duplicates or out-of-range nodes.
    static Graph from_edges(std::size_t n, EdgeList edges);

    std::size_t node_count() const { return n_; }
    bool is_complete() const { return complete_; }
    /// Number of undirected edges (n(n-1)/2 for the complete graph).
    std::size_t edge_count() const;
    /// Explicit edges; empty for the complete graph.
    const EdgeList& edges() const { return edges_; }
    /// Neighbours of an explicit graph.
    std::span<const Node> neighbors(Node v) const;
    std::size_t degree(Node v) const;
    /// Connected components (isolated vertices count as components).
    std::size_t component_count() const;

private:
    std::size_t n_ = 0;
    bool complete_ = false;
    EdgeList edges_;
    std::vector<std::size_t> offsets_;
    std::vector<Node> adjacency_;
};

/// G(N, p) with p = mean_degree / (N - 1), sampled by geometric skipping.
Graph make_er_graph(std::size_t n, double mean_degree, std::uint64_t seed);

enum class Selection {
    EdgeFirst,     ///< uniform edge, uniform orientation
    SpeakerFirst,  ///< uniform speaker, uniform neighbour as listener
};

const char* to_string(Selection s);

struct AgentPopulation {
    std::vector<std::uint32_t> spins;
    std::shared_ptr<const Graph> graph;
    std::uint64_t seed = 0;
};

/// Population with round(N n_i) agents per state (largest remainder),
/// placed on the graph by a seeded shuffle.
AgentPopulation make_population(std::shared_ptr<const Graph> graph, const Macrostate& n0,
                                std::uint64_t seed);

/// Result of one interaction; `changed` is false when the listener kept its
/// spin or no interaction was possible.
struct StepOutcome {
    bool interacted = false;
    bool changed = false;
    std::uint32_t listener = 0;
    std::uint32_t from = 0;
    std::uint32_t to = 0;
};

/// One speaker/listener interaction applied in place.
StepOutcome step(AgentPopulation& pop, const SignallingSystem& system, Rng& rng,
                 Selection selection = Selection::EdgeFirst);

Macrostate node_macrostate(const AgentPopulation& pop, std::size_t K);
/// Fraction of edges per unordered spin pair, canonical order.
LinkMacrostate link_macrostate(const AgentPopulation& pop, std::size_t K);

struct RunOptions {
    double t_end = 10.0;         ///< time units of N steps each
    double record_every = 1.0;   ///< in time units
    Selection selection = Selection::EdgeFirst;
    bool record_links = false;
};

struct RunResult {
    Trajectory nodes;
    std::optional<Trajectory> links;
    std::uint64_t steps = 0;
};

/// Runs the microscopic dynamics, driven by a generator seeded from
/// pop.seed. Identical inputs give identical output.
RunResult run(AgentPopulation pop, const SignallingSystem& system, const RunOptions& options);

struct EnsembleConfig {
    std::shared_ptr<const Graph> graph;
    Macrostate n0;
    RunOptions run;
    std::uint64_t seed = 1;
};

struct EnsembleStats {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> mean;
    std::vector<Eigen::VectorXd> std_error;
    std::optional<std::vector<Eigen::VectorXd>> link_mean;
    std::size_t runs = 0;
};

/// Independent runs; run r uses stream derive_seed(seed, r) for both the
/// initial placement and the dynamics.
EnsembleStats ensemble(const SignallingSystem& system, const EnsembleConfig& config,
                       std::size_t runs);

struct Deviation {
    double sup = 0.0;
    double time = 0.0;
    std::size_t component = 0;
};

/// max over recorded times and components of |mean - reference(t)|,
/// with the reference linearly interpolated at the recorded times.
Deviation compare(const std::vector<double>& times, const std::vector<Eigen::VectorXd>& mean,
                  const Trajectory& reference, double t_max = INFINITY);
Deviation compare(const EnsembleStats& stats, const Trajectory& reference,
                  double t_max = INFINITY);

/// Survival function of the chi-square distribution with integer degrees
/// of freedom.
double chi_square_sf(double x, int dof);

} // namespace monosig
