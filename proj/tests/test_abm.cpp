#include <doctest.h>

#include <cmath>
#include <map>

#include "monosig/abm.hpp"
#include "monosig/meanfield.hpp"

using namespace monosig;

namespace {

const std::uint32_t A = 0, AB = 1, B = 2;

std::shared_ptr<const Graph> single_edge()
{
    return std::make_shared<const Graph>(Graph::from_edges(2, {{0, 1}}));
}

AgentPopulation pair_population(std::uint32_t a, std::uint32_t b)
{
    AgentPopulation pop;
    pop.graph = single_edge();
    pop.spins = {a, b};
    return pop;
}

} // namespace

TEST_CASE("graph construction")
{
    const auto g = Graph::from_edges(4, {{0, 1}, {1, 2}});
    CHECK(g.edge_count() == 2);
    CHECK(g.degree(1) == 2);
    CHECK(g.degree(3) == 0);
    CHECK(g.neighbors(1).size() == 2);
    CHECK(g.component_count() == 2);
    CHECK(!g.is_complete());

    const auto k = Graph::complete(5);
    CHECK(k.edge_count() == 10);
    CHECK(k.degree(0) == 4);
    CHECK(k.component_count() == 1);
    CHECK_THROWS_AS(k.neighbors(0), InvalidInput);

    CHECK_THROWS_AS(Graph::from_edges(3, {{0, 0}}), InvalidInput);
    CHECK_THROWS_AS(Graph::from_edges(3, {{0, 1}, {1, 0}}), InvalidInput);
    CHECK_THROWS_AS(Graph::from_edges(3, {{0, 3}}), InvalidInput);
    CHECK_THROWS_AS(Graph::from_edges(1, {}), InvalidParameter);
    CHECK_THROWS_AS(Graph::complete(1), InvalidParameter);
}

TEST_CASE("Erdos-Renyi graphs")
{
    const auto g = make_er_graph(4000, 10.0, 3);
    const double mean = 2.0 * static_cast<double>(g.edge_count()) / 4000.0;
    // Edge count is binomial with mean 20000, sd about 141.
    CHECK(std::abs(mean - 10.0) < 0.25);
    CHECK(make_er_graph(4000, 10.0, 3).edges() == g.edges());
    CHECK(make_er_graph(4000, 10.0, 4).edges() != g.edges());

    const auto empty = make_er_graph(100, 0.0, 1);
    CHECK(empty.edge_count() == 0);
    CHECK(empty.component_count() == 100);

    CHECK_THROWS_AS(make_er_graph(100, -1.0, 1), InvalidParameter);
    CHECK_THROWS_AS(make_er_graph(100, 99.0, 1), InvalidParameter);
    CHECK_THROWS_AS(make_er_graph(1, 0.0, 1), InvalidParameter);
}

TEST_CASE("population placement")
{
    auto counts = [](const AgentPopulation& p, std::size_t K) {
        std::vector<int> c(K);
        for (auto s : p.spins)
            ++c[s];
        return c;
    };
    const auto g10 = std::make_shared<const Graph>(Graph::complete(10));
    CHECK(counts(make_population(g10, Eigen::Vector3d(0.6, 0, 0.4), 1), 3) ==
          std::vector<int>{6, 0, 4});
    const auto g7 = std::make_shared<const Graph>(Graph::complete(7));
    CHECK(counts(make_population(g7, Eigen::Vector3d(0.5, 0.25, 0.25), 1), 3) ==
          std::vector<int>{3, 2, 2});
    CHECK(make_population(g10, Eigen::Vector3d(0.6, 0, 0.4), 1).spins ==
          make_population(g10, Eigen::Vector3d(0.6, 0, 0.4), 1).spins);
    CHECK_THROWS_AS(make_population(g10, Eigen::Vector3d(0.6, 0.1, 0.4), 1), InvalidInput);
    CHECK_THROWS_AS(make_population(nullptr, Eigen::Vector3d(1, 0, 0), 1), InvalidInput);
}

TEST_CASE("single interactions")
{
    const auto s = make_long();

    SUBCASE("consensus is absorbing")
    {
        AgentPopulation pop;
        pop.graph = std::make_shared<const Graph>(Graph::complete(50));
        pop.spins.assign(50, A);
        Rng rng(1);
        for (int i = 0; i < 10000; ++i)
            CHECK(!step(pop, s, rng).changed);
        CHECK(node_macrostate(pop, 3) == Eigen::Vector3d(1, 0, 0));
    }
    SUBCASE("isolated (A,B) edge splits evenly")
    {
        Rng rng(77);
        const int trials = 100000;
        int a_ab = 0, ab_b = 0;
        for (int i = 0; i < trials; ++i) {
            auto pop = pair_population(A, B);
            step(pop, s, rng);
            const auto lo = std::min(pop.spins[0], pop.spins[1]);
            const auto hi = std::max(pop.spins[0], pop.spins[1]);
            if (lo == A && hi == AB)
                ++a_ab;
            else if (lo == AB && hi == B)
                ++ab_b;
        }
        CHECK(a_ab + ab_b == trials);
        const double sigma = std::sqrt(trials * 0.25);
        CHECK(std::abs(a_ab - trials / 2.0) <= 3 * sigma);
    }
    SUBCASE("a committed agent never changes")
    {
        const auto sc = with_committed(s, {{"A", 1.0}});
        const auto ca = static_cast<std::uint32_t>(sc.spins.index_of("C_A"));
        AgentPopulation pop;
        pop.graph = std::make_shared<const Graph>(Graph::complete(10));
        pop.spins.assign(10, B);
        pop.spins[4] = ca;
        Rng rng(5);
        bool any_change = false;
        for (int i = 0; i < 100000; ++i) {
            const auto out = step(pop, sc, rng);
            any_change = any_change || out.changed;
            REQUIRE(pop.spins[4] == ca);
        }
        CHECK(any_change);
    }
    SUBCASE("at most one agent changes per step")
    {
        AgentPopulation pop = make_population(std::make_shared<const Graph>(Graph::complete(40)),
                                              Eigen::Vector3d(0.4, 0.2, 0.4), 9);
        Rng rng(10);
        for (int i = 0; i < 2000; ++i) {
            const auto before = pop.spins;
            const auto out = step(pop, s, rng);
            int diff = 0;
            for (std::size_t k = 0; k < before.size(); ++k)
                diff += before[k] != pop.spins[k];
            CHECK(diff == (out.changed ? 1 : 0));
            if (out.changed) {
                CHECK(before[out.listener] == out.from);
                CHECK(pop.spins[out.listener] == out.to);
            }
        }
    }
    SUBCASE("edgeless graph has no interactions")
    {
        AgentPopulation pop;
        pop.graph = std::make_shared<const Graph>(make_er_graph(10, 0.0, 1));
        pop.spins.assign(10, B);
        Rng rng(1);
        CHECK(!step(pop, s, rng, Selection::EdgeFirst).interacted);
        CHECK(!step(pop, s, rng, Selection::SpeakerFirst).interacted);
    }
    SUBCASE("invalid populations")
    {
        auto pop = pair_population(A, 7);
        Rng rng(1);
        CHECK_THROWS_AS(step(pop, s, rng), InvalidInput);
    }
}

TEST_CASE("link macrostates")
{
    auto pop = pair_population(A, B);
    const Eigen::VectorXd l = link_macrostate(pop, 3);
    CHECK(l(static_cast<Eigen::Index>(link_index(3, A, B))) == 1.0);

    AgentPopulation full;
    full.graph = std::make_shared<const Graph>(Graph::complete(4));
    full.spins = {A, A, B, AB};
    const Eigen::VectorXd c = link_macrostate(full, 3);
    CHECK(c(static_cast<Eigen::Index>(link_index(3, A, A))) == doctest::Approx(1.0 / 6));
    CHECK(c(static_cast<Eigen::Index>(link_index(3, A, B))) == doctest::Approx(2.0 / 6));
    CHECK(c.sum() == doctest::Approx(1.0));
}

TEST_CASE("runs")
{
    const auto s = make_long();
    const Eigen::Vector3d n0(0.6, 0, 0.4);

    SUBCASE("zero duration records the initial state only")
    {
        RunOptions o;
        o.t_end = 0;
        const auto pop = make_population(std::make_shared<const Graph>(Graph::complete(100)), n0, 1);
        const auto r = run(pop, s, o);
        CHECK(r.nodes.size() == 1);
        CHECK(r.steps == 0);
        CHECK((r.nodes.back() - n0).norm() < 1e-15);
    }
    SUBCASE("identical seeds give identical trajectories")
    {
        RunOptions o;
        o.record_every = 0.5;
        o.record_links = true;
        const auto g = std::make_shared<const Graph>(make_er_graph(500, 6.0, 2));
        const auto pop = make_population(g, n0, 42);
        const auto a = run(pop, s, o);
        const auto b = run(pop, s, o);
        REQUIRE(a.nodes.size() == b.nodes.size());
        for (std::size_t i = 0; i < a.nodes.size(); ++i) {
            CHECK(a.nodes.times[i] == b.nodes.times[i]);
            CHECK(a.nodes.states[i] == b.nodes.states[i]);
            CHECK(a.links->states[i] == b.links->states[i]);
        }
        auto other = pop;
        other.seed = 43;
        CHECK(run(other, s, o).nodes.back() != a.nodes.back());
    }
    SUBCASE("recorded macrostates match a replay of single steps")
    {
        for (auto sel : {Selection::EdgeFirst, Selection::SpeakerFirst}) {
            RunOptions o;
            o.t_end = 3;
            o.selection = sel;
            o.record_links = true;
            const auto g = std::make_shared<const Graph>(make_er_graph(300, 4.0, 8));
            auto pop = make_population(g, n0, 3);
            const auto r = run(pop, s, o);
            Rng rng(pop.seed);
            for (std::uint64_t i = 0; i < r.steps; ++i)
                step(pop, s, rng, sel);
            CHECK((r.nodes.back() - node_macrostate(pop, 3)).norm() < 1e-12);
            CHECK((r.links->back() - link_macrostate(pop, 3)).norm() < 1e-12);
        }
    }
    SUBCASE("frozen dynamics without edges")
    {
        const auto g = std::make_shared<const Graph>(make_er_graph(100, 0.0, 1));
        RunOptions o;
        o.t_end = 5;
        o.record_links = true;
        const auto r = run(make_population(g, n0, 1), s, o);
        for (const auto& n : r.nodes.states)
            CHECK((n - n0).norm() < 1e-15);
        CHECK(!r.links);
    }
    SUBCASE("argument checks")
    {
        RunOptions o;
        o.record_every = 0;
        const auto pop = make_population(std::make_shared<const Graph>(Graph::complete(10)), n0, 1);
        CHECK_THROWS_AS(run(pop, s, o), InvalidParameter);
    }
}

TEST_CASE("majority A wins on the complete graph")
{
    const auto s = make_long();
    const auto g = std::make_shared<const Graph>(Graph::complete(10000));
    RunOptions o;
    o.t_end = 50;
    o.record_every = 50;
    int wins = 0;
    for (std::uint64_t r = 0; r < 100; ++r) {
        const auto res = run(make_population(g, Eigen::Vector3d(0.6, 0, 0.4), derive_seed(5, r)),
                             s, o);
        const Eigen::VectorXd end = res.nodes.back();
        wins += end(A) > 0.5;
    }
    CHECK(wins >= 95);
}

TEST_CASE("ensembles and deviation")
{
    const auto s = make_long();
    EnsembleConfig c;
    c.graph = std::make_shared<const Graph>(Graph::complete(2000));
    c.n0 = Eigen::Vector3d(0.6, 0, 0.4);
    c.run.t_end = 5;
    c.run.record_every = 0.5;
    const auto stats = ensemble(s, c, 8);
    CHECK(stats.runs == 8);
    CHECK(stats.times.size() == 11);
    CHECK((stats.mean.front() - c.n0).norm() < 1e-15);
    for (const auto& se : stats.std_error)
        CHECK(se.minCoeff() >= 0.0);
    CHECK(stats.std_error.back().maxCoeff() > 0.0);

    const auto again = ensemble(s, c, 8);
    CHECK(again.mean.back() == stats.mean.back());

    IntegrationOptions io;
    io.record_interval = 0.1;
    const auto ode = integrate(s, c.n0, 5.0, io);
    CHECK(compare(stats, ode).sup < 5.0 / std::sqrt(2000.0));
    CHECK_THROWS_AS(ensemble(s, c, 0), InvalidParameter);
}

TEST_CASE("deviation against an interpolated reference")
{
    Trajectory ref;
    ref.times = {0.0, 2.0};
    ref.states = {Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 0)};
    const std::vector<double> times{0.0, 1.0, 2.0};
    const std::vector<Eigen::VectorXd> mean{Eigen::Vector2d(0, 1), Eigen::Vector2d(0.5, 0.5),
                                            Eigen::Vector2d(0.7, 0.3)};
    const auto d = compare(times, mean, ref);
    CHECK(d.sup == doctest::Approx(0.3));
    CHECK(d.time == 2.0);
    CHECK(compare(times, mean, ref, 1.5).sup == 0.0);
}

TEST_CASE("chi-square survival function")
{
    CHECK(chi_square_sf(0.0, 3) == 1.0);
    CHECK(chi_square_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(chi_square_sf(5.991464547107979, 2) == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(chi_square_sf(7.814727903251178, 3) == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(chi_square_sf(11.070497693516351, 5) == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(chi_square_sf(13.276704135987622, 4) == doctest::Approx(0.01).epsilon(1e-10));
    CHECK_THROWS_AS(chi_square_sf(1.0, 0), InvalidParameter);
}
