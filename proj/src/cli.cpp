#include "monosig/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "monosig/abm.hpp"
#include "monosig/io.hpp"
#include "monosig/meanfield.hpp"
#include "monosig/monotonicity.hpp"
#include "monosig/random.hpp"
#include "monosig/sparse.hpp"

namespace monosig::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep))
        parts.push_back(cur);
    if (!text.empty() && text.back() == sep)
        parts.emplace_back();
    return parts;
}

std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::string show(const Eigen::VectorXd& v)
{
    std::string s = "(";
    for (Eigen::Index i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + format_number(v(i));
    return s + ")";
}

Json vector_json(const Eigen::VectorXd& v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

} // namespace

SignallingSystem build(const std::string& spec)
{
    if (spec == "long")
        return make_long();
    if (spec == "counterexample")
        return make_counterexample();
    if (spec.rfind("kng:", 0) == 0) {
        const std::string arg = spec.substr(4);
        std::size_t used = 0;
        int K = 0;
        try {
            K = std::stoi(arg, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != arg.size())
            throw InvalidParameter("kng builder needs an integer, got \"" + arg + "\"");
        return make_kng(K);
    }
    if (spec.rfind("committed:", 0) == 0) {
        std::string rest = spec.substr(10);
        std::string base_name = "long";
        if (const auto at = rest.find('@'); at != std::string::npos) {
            base_name = rest.substr(at + 1);
            rest = rest.substr(0, at);
        }
        if (base_name.rfind("committed:", 0) == 0)
            throw InvalidParameter("committed builders cannot be nested");
        const SignallingSystem base = build(base_name);
        std::vector<CommittedSpec> specs;
        for (const auto& label : split(rest, ',')) {
            const std::string l = trim(label);
            const auto idx = base.spins.index_of(l);
            specs.push_back({l, base.alpha(static_cast<Eigen::Index>(idx))});
        }
        if (specs.empty())
            throw InvalidParameter("committed builder needs at least one state");
        return with_committed(base, specs);
    }
    throw InvalidParameter("unknown builder \"" + spec +
                           "\" (expected long, kng:K, counterexample or committed:...)");
}

Eigen::VectorXd parse_vector(const std::string& text)
{
    const auto parts = split(text, ',');
    if (parts.empty())
        throw InvalidParameter("empty vector");
    Eigen::VectorXd v(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string p = trim(parts[i]);
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(p, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != p.size())
            throw InvalidParameter("cannot parse \"" + p + "\" as a number");
        v(static_cast<Eigen::Index>(i)) = x;
    }
    return v;
}

PartialOrder parse_chain(const std::string& text, const SpinSpace& spins)
{
    std::vector<std::size_t> ranking;
    for (const auto& label : split(text, ','))
        ranking.push_back(spins.index_of(trim(label)));
    return PartialOrder::chain(spins.size(), ranking);
}

namespace {

struct Options {
    std::string builder, system_path, order_path, chain;
    std::string n0, l0, out, nodes_out, summary;
    std::optional<double> t_end, dt, record, mean_degree, tol;
    std::string method = "rk4";
    std::size_t n_agents = 10000, runs = 20, pairs = 100, checkpoints = 20, samples = 1000;
    std::size_t max_states = 6;
    std::uint64_t seed = 1;
    bool strict = false;
    std::string related = "one_sided", kernel = "conditional", selection = "edge_first";
    std::string committed;
    double q_low = 0.0, q_high = 0.5, q_tol = 1e-4, threshold = 0.9;
    std::string target, opposing;
    int grid = 10;
    std::vector<std::string> fixed;
};

SignallingSystem load_system(const Options& o)
{
    if (!o.builder.empty() && !o.system_path.empty())
        throw InvalidParameter("give either --builder or --system, not both");
    if (!o.system_path.empty())
        return system_from_json(read_json(o.system_path));
    if (o.builder.empty())
        throw InvalidParameter("a system is required (--builder or --system)");
    return build(o.builder);
}

std::optional<PartialOrder> load_order(const Options& o, const SignallingSystem& s)
{
    if (!o.order_path.empty() && !o.chain.empty())
        throw InvalidParameter("give either --order or --chain, not both");
    if (!o.order_path.empty())
        return order_from_json(read_json(o.order_path), s.spins);
    if (!o.chain.empty())
        return parse_chain(o.chain, s.spins);
    return std::nullopt;
}

PartialOrder require_order(const Options& o, const SignallingSystem& s)
{
    auto order = load_order(o, s);
    if (!order)
        throw InvalidParameter("an order is required (--order or --chain)");
    return *order;
}

Macrostate initial_state(const Options& o, const SignallingSystem& s)
{
    if (o.n0.empty())
        throw InvalidParameter("--n0 is required");
    Eigen::VectorXd n = parse_vector(o.n0);
    if (static_cast<std::size_t>(n.size()) != s.size())
        throw InvalidInput("--n0 has " + std::to_string(n.size()) + " entries, the system has " +
                           std::to_string(s.size()) + " states");
    require_macrostate(n, "--n0");
    return n;
}

SparseModel sparse_model(const Options& o)
{
    SparseModel m;
    m.mean_degree = o.mean_degree.value_or(10.0);
    if (o.related == "two_sided")
        m.related = RelatedForm::TwoSided;
    else if (o.related == "one_sided")
        m.related = RelatedForm::OneSided;
    else
        throw InvalidParameter("--related must be two_sided or one_sided");
    if (o.kernel == "conditional")
        m.kernel = KernelForm::ListenerConditional;
    else if (o.kernel == "mixture")
        m.kernel = KernelForm::LinkMixture;
    else
        throw InvalidParameter("--kernel must be conditional or mixture");
    return m;
}

IntegrationOptions integration(const Options& o, double default_record)
{
    IntegrationOptions io;
    io.dt = o.dt.value_or(1e-3);
    io.record_interval = o.record.value_or(default_record);
    if (o.method == "rk4")
        io.method = Method::RK4;
    else if (o.method == "euler")
        io.method = Method::Euler;
    else
        throw InvalidParameter("--method must be rk4 or euler");
    return io;
}

void emit(const std::string& path, const std::string& content)
{
    write_file_atomic(path, content);
}

std::string dump(const Json& j)
{
    return j.dump(2) + "\n";
}

Json violations_json(const std::vector<OrderViolation>& v, std::size_t pairs)
{
    Json doc;
    doc["pairs"] = pairs;
    doc["violationCount"] = v.size();
    Json list = Json::array();
    for (const auto& x : v) {
        Json j;
        j["pair"] = x.pair;
        j["time"] = x.time;
        j["residual"] = x.residual;
        j["lower"] = vector_json(x.lower);
        j["upper"] = vector_json(x.upper);
        list.push_back(j);
    }
    doc["violations"] = list;
    return doc;
}

void print_violations(std::ostream& out, const std::vector<OrderViolation>& v, std::size_t pairs)
{
    std::size_t bad_pairs = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (i == 0 || v[i].pair != v[i - 1].pair)
            ++bad_pairs;
    out << "pairs checked: " << pairs << "\n";
    out << "violations: " << v.size() << " checkpoints in " << bad_pairs << " pairs\n";
    if (!v.empty()) {
        const auto worst = std::max_element(v.begin(), v.end(), [](const auto& a, const auto& b) {
            return a.residual < b.residual;
        });
        out << "worst: pair " << worst->pair << " at t = " << format_number(worst->time)
            << ", residual " << format_number(worst->residual) << "\n";
    }
}

HarnessOptions harness(const Options& o)
{
    HarnessOptions h;
    h.pair_count = o.pairs;
    h.t_end = o.t_end.value_or(50.0);
    h.checkpoints = o.checkpoints;
    h.seed = o.seed;
    h.dt = o.dt.value_or(1e-3);
    h.tol = o.tol.value_or(kConeTol);
    return h;
}

void print_report(std::ostream& out, const MonotonicityReport& r, const SpinSpace& spins)
{
    out << "verdict: " << to_string(r.verdict) << "\n";
    if (r.order)
        out << "order: " << describe(*r.order, spins.labels()) << "\n";
    for (const auto& c : r.conditions) {
        out << "  (" << c.name << ") " << (c.pass ? "pass" : "FAIL");
        if (c.margin)
            out << "  margin " << format_number(*c.margin);
        if (!c.witness.empty())
            out << "  [" << c.witness << "]";
        out << "\n";
    }
    if (r.orders_examined > 1)
        out << "orders examined: " << r.orders_examined << "\n";
    out << "note: " << r.note << "\n";
}

int cmd_check(const Options& o, std::ostream& out)
{
    const auto s = load_system(o);
    const auto report = certify(s, require_order(o, s));
    print_report(out, report, s.spins);
    if (!o.out.empty())
        emit(o.out, dump(to_json(report, s.spins)));
    return o.strict && report.verdict != Verdict::CertifiedMonotone ? 2 : 0;
}

int cmd_search(const Options& o, std::ostream& out)
{
    const auto s = load_system(o);
    const auto report = find_order(s, o.max_states);
    print_report(out, report, s.spins);
    if (!o.out.empty())
        emit(o.out, dump(to_json(report, s.spins)));
    return o.strict && report.verdict != Verdict::CertifiedMonotone ? 2 : 0;
}

int cmd_type_c(const Options& o, std::ostream& out)
{
    const auto s = load_system(o);
    const auto order = require_order(o, s);
    const auto r = type_c_sampled(s, order, o.samples, o.seed, o.tol.value_or(kConeTol));
    Json doc;
    doc["pass"] = r.pass;
    doc["samples"] = r.samples_checked;
    doc["seed"] = o.seed;
    doc["rng"] = Rng::algorithm;
    out << "type-c: " << (r.pass ? "pass" : "FAIL") << " after " << r.samples_checked
        << " samples\n";
    if (!r.pass) {
        const auto g = hasse_edges(order).edges[r.generator];
        const std::string gen = s.spins.label(g.second) + " - " + s.spins.label(g.first);
        out << "witness: n = " << show(*r.point) << ", generator " << gen
            << ", derivative " << show(*r.derivative) << ", residual "
            << format_number(r.residual) << "\n";
        doc["point"] = vector_json(*r.point);
        doc["generator"] = Json::array({s.spins.label(g.first), s.spins.label(g.second)});
        doc["derivative"] = vector_json(*r.derivative);
        doc["residual"] = r.residual;
    }
    if (!o.out.empty())
        emit(o.out, dump(doc));
    return o.strict && !r.pass ? 2 : 0;
}

int cmd_integrate(const Options& o, std::ostream& out)
{
    const auto s = load_system(o);
    const auto n0 = initial_state(o, s);
    const double t_end = o.t_end.value_or(50.0);
    const auto traj = integrate(s, n0, t_end, integration(o, 0.1));
    const auto csv = to_csv(traj, s.spins.labels());
    if (o.out.empty()) {
        out << csv;
    } else {
        emit(o.out, csv);
        out << "final state at t = " << format_number(t_end) << ": " << show(traj.back()) << "\n";
    }
    return 0;
}

int cmd_integrate_sparse(const Options& o, std::ostream& out)
{
    const auto s = load_system(o);
    const auto model = sparse_model(o);
    LinkMacrostate l0;
    if (!o.l0.empty()) {
        if (!o.n0.empty())
            throw InvalidParameter("give either --n0 or --l0, not both");
        l0 = parse_vector(o.l0);
        if (static_cast<std::size_t>(l0.size()) != link_count(s.size()))
            throw InvalidInput("--l0 needs " + std::to_string(link_count(s.size())) + " entries");
    } else {
        l0 = product_link_state(initial_state(o, s));
    }
    const double t_end = o.t_end.value_or(50.0);
    const auto traj = integrate_sparse(s, model, l0, t_end, integration(o, 0.1));
    const auto nodes = node_marginals(traj);
    const auto csv = to_csv(traj, link_labels(s.spins));
    if (!o.nodes_out.empty())
        emit(o.nodes_out, to_csv(nodes, s.spins.labels()));
    if (o.out.empty()) {
        out << csv;
    } else {
        emit(o.out, csv);
        out << "model: <k> = " << format_number(model.mean_degree)
            << ", related " << to_string(model.related) << ", kernel "
            << to_string(model.kernel) << "\n";
        out << "final node marginal at t = " << format_number(t_end) << ": "
            << show(nodes.back()) << "\n";
    }
    return 0;
}

int cmd_abm(const Options& o, std::ostream& out, std::ostream& err)
{
    const auto s = load_system(o);
    const auto n0 = initial_state(o, s);
    const bool sparse = o.mean_degree.has_value();

    std::shared_ptr<const Graph> graph;
    if (sparse) {
        auto g = make_er_graph(o.n_agents, *o.mean_degree, derive_seed(o.seed, 0x6772617068ULL));
        if (const auto c = g.component_count(); c > 1)
            err << "warning: graph is disconnected (" << c << " components)\n";
        graph = std::make_shared<const Graph>(std::move(g));
    } else {
        graph = std::make_shared<const Graph>(Graph::complete(o.n_agents));
    }
    if (o.selection != "edge_first" && o.selection != "speaker_first")
        throw InvalidParameter("--selection must be edge_first or speaker_first");

    EnsembleConfig config;
    config.graph = graph;
    config.n0 = n0;
    config.seed = o.seed;
    config.run.t_end = o.t_end.value_or(10.0);
    config.run.record_every = o.record.value_or(0.1);
    config.run.selection =
        o.selection == "edge_first" ? Selection::EdgeFirst : Selection::SpeakerFirst;
    config.run.record_links = sparse;
    const auto stats = ensemble(s, config, o.runs);

    IntegrationOptions io;
    io.dt = o.dt.value_or(1e-3);
    io.record_interval = config.run.record_every;
    Json doc;
    doc["runs"] = o.runs;
    doc["seed"] = o.seed;
    doc["rng"] = Rng::algorithm;
    doc["nAgents"] = o.n_agents;
    doc["graph"] = sparse ? "erdos_renyi" : "complete";
    doc["selection"] = to_string(config.run.selection);
    doc["tEnd"] = config.run.t_end;

    Deviation dev;
    if (sparse) {
        const auto model = sparse_model(o);
        const auto links = integrate_sparse(s, model, product_link_state(n0), config.run.t_end, io);
        dev = compare(stats, node_marginals(links));
        const auto link_dev = compare(stats.times, *stats.link_mean, links);
        doc["meanDegree"] = *o.mean_degree;
        doc["edges"] = graph->edge_count();
        doc["related"] = to_string(model.related);
        doc["kernel"] = to_string(model.kernel);
        doc["linkSupDeviation"] = link_dev.sup;
        out << "link sup deviation from pair approximation: " << format_number(link_dev.sup)
            << " (t = " << format_number(link_dev.time) << ")\n";
    } else {
        dev = compare(stats, integrate(s, n0, config.run.t_end, io));
    }
    double max_se = 0.0;
    for (const auto& se : stats.std_error)
        max_se = std::max(max_se, se.maxCoeff());
    doc["supDeviation"] = dev.sup;
    doc["supDeviationTime"] = dev.time;
    doc["supDeviationState"] = s.spins.label(dev.component);
    doc["maxStdError"] = max_se;
    doc["final"] = vector_json(stats.mean.back());

    out << "runs: " << o.runs << ", agents: " << o.n_agents << ", graph: "
        << doc["graph"].get<std::string>() << "\n";
    out << "ensemble mean at t = " << format_number(stats.times.back()) << ": "
        << show(stats.mean.back()) << "\n";
    out << "node sup deviation from " << (sparse ? "pair approximation" : "mean field") << ": "
        << format_number(dev.sup) << " (t = "
        << format_number(dev.time) << ", state " << s.spins.label(dev.component) << ")\n";

    if (!o.out.empty()) {
        Trajectory mean{stats.times, stats.mean};
        emit(o.out, to_csv(mean, s.spins.labels()));
    }
    if (!o.summary.empty())
        emit(o.summary, dump(doc));
    return 0;
}

int cmd_sweep(const Options& o, std::ostream& out)
{
    const auto s = load_system(o);
    if (s.committed.empty())
        throw InvalidParameter("the system has no committed state (try --builder committed:A)");
    const std::size_t c = o.committed.empty() ? s.committed.front() : s.spins.index_of(o.committed);
    SweepOptions so;
    so.dt = o.dt.value_or(1e-3);
    so.t_end = o.t_end.value_or(200.0);
    so.dominance_threshold = o.threshold;
    if (!o.target.empty())
        so.target = o.target;
    if (!o.opposing.empty())
        so.opposing = o.opposing;
    const auto r = sweep_committed(s, c, o.q_low, o.q_high, o.q_tol, so);
    out << "committed state: " << s.spins.label(c) << ", target " << r.target << ", start "
        << r.opposing << "\n";
    out << "qc = " << format_number(r.qc) << " in [" << format_number(r.lo) << ", "
        << format_number(r.hi) << "] after " << r.classifications.size() << " integrations\n";
    if (!o.out.empty())
        emit(o.out, dump(to_json(r)));
    return 0;
}

int cmd_verify(const Options& o, std::ostream& out)
{
    const auto s = load_system(o);
    const auto order = require_order(o, s);
    const auto v = order_harness(s, order, harness(o));
    print_violations(out, v, o.pairs);
    if (!o.out.empty())
        emit(o.out, dump(violations_json(v, o.pairs)));
    return o.strict && !v.empty() ? 2 : 0;
}

int cmd_verify_sparse(const Options& o, std::ostream& out)
{
    const auto s = load_system(o);
    const auto order = require_order(o, s);
    const auto model = sparse_model(o);
    const auto v = order_harness_sparse(s, order, model, harness(o));
    out << "model: <k> = " << format_number(model.mean_degree) << ", related "
        << to_string(model.related) << ", kernel " << to_string(model.kernel) << "\n";
    print_violations(out, v, o.pairs);
    if (!o.out.empty())
        emit(o.out, dump(violations_json(v, o.pairs)));
    return o.strict && !v.empty() ? 2 : 0;
}

int cmd_equilibria(const Options& o, std::ostream& out)
{
    const auto s = load_system(o);
    EquilibriumOptions eo;
    eo.grid_density = o.grid;
    for (const auto& f : o.fixed) {
        const auto eq = f.find('=');
        if (eq == std::string::npos)
            throw InvalidParameter("--fix expects LABEL=FRACTION, got \"" + f + "\"");
        const auto idx = s.spins.index_of(trim(f.substr(0, eq)));
        const auto v = parse_vector(f.substr(eq + 1));
        eo.committed_fractions.emplace_back(idx, v(0));
    }
    const auto search = find_equilibria(s, eo);
    Json list = Json::array();
    out << search.equilibria.size() << " equilibria (" << search.seeds << " seeds, "
        << search.dropped_seeds << " without convergence)\n";
    for (const auto& e : search.equilibria) {
        out << "  " << show(e.state) << "  " << to_string(e.classification) << "  residual "
            << format_number(e.residual) << "  eigenvalues";
        Json eig = Json::array();
        for (const auto& z : e.eigenvalues) {
            out << " " << format_number(z.real());
            if (z.imag() != 0.0)
                out << (z.imag() > 0 ? "+" : "") << format_number(z.imag()) << "i";
            eig.push_back(Json::array({z.real(), z.imag()}));
        }
        out << "\n";
        Json j;
        j["state"] = vector_json(e.state);
        j["classification"] = to_string(e.classification);
        j["residual"] = e.residual;
        j["eigenvalues"] = eig;
        list.push_back(j);
    }
    if (!o.out.empty()) {
        Json doc;
        doc["labels"] = s.spins.labels();
        doc["equilibria"] = list;
        emit(o.out, dump(doc));
    }
    return 0;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Monotonicity analysis and simulation of binary signalling systems", "monosig"};
    app.require_subcommand(1);
    Options o;

    auto system_opts = [&](CLI::App* sub) {
        sub->add_option("--builder", o.builder,
                        "long | kng:K | counterexample | committed:A[,B][@base]");
        sub->add_option("--system", o.system_path, "system JSON document");
    };
    auto order_opts = [&](CLI::App* sub) {
        sub->add_option("--order", o.order_path, "order JSON document");
        sub->add_option("--chain", o.chain, "chain as comma-separated labels, lowest first");
    };
    auto time_opts = [&](CLI::App* sub) {
        sub->add_option("--t-end", o.t_end, "final time");
        sub->add_option("--dt", o.dt, "integration step");
    };
    auto sparse_opts = [&](CLI::App* sub) {
        sub->add_option("--mean-degree", o.mean_degree, "mean degree <k> (default 10)");
        sub->add_option("--related", o.related, "two_sided | one_sided")
            ->check(CLI::IsMember({"two_sided", "one_sided"}));
        sub->add_option("--kernel", o.kernel, "conditional | mixture")
            ->check(CLI::IsMember({"conditional", "mixture"}));
    };
    auto harness_opts = [&](CLI::App* sub) {
        system_opts(sub);
        order_opts(sub);
        time_opts(sub);
        sub->add_option("--pairs", o.pairs, "ordered pairs to sample");
        sub->add_option("--checkpoints", o.checkpoints, "checkpoints per trajectory");
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--tol", o.tol, "cone tolerance");
        sub->add_option("--out", o.out, "violations JSON");
        sub->add_flag("--strict", o.strict, "exit 2 when a violation is found");
    };

    auto* check = app.add_subcommand("check", "certify a system against a given order");
    system_opts(check);
    order_opts(check);
    check->add_option("--out", o.out, "report JSON");
    check->add_flag("--strict", o.strict, "exit 2 unless certified");

    auto* search = app.add_subcommand("search-order", "search alpha-consistent orders");
    system_opts(search);
    search->add_option("--max-states", o.max_states, "size cap for exhaustive search");
    search->add_option("--out", o.out, "report JSON");
    search->add_flag("--strict", o.strict, "exit 2 unless an order is certified");

    auto* type_c = app.add_subcommand("type-c", "sampled directional-derivative check");
    system_opts(type_c);
    order_opts(type_c);
    type_c->add_option("--samples", o.samples, "interior points to sample");
    type_c->add_option("--seed", o.seed, "random seed");
    type_c->add_option("--tol", o.tol, "cone tolerance");
    type_c->add_option("--out", o.out, "result JSON");
    type_c->add_flag("--strict", o.strict, "exit 2 on a counterexample");

    auto* integ = app.add_subcommand("integrate", "integrate the complete-graph mean field");
    system_opts(integ);
    time_opts(integ);
    integ->add_option("--n0", o.n0, "initial macrostate, comma-separated");
    integ->add_option("--record", o.record, "recording interval (0 = every step)");
    integ->add_option("--method", o.method, "rk4 | euler")->check(CLI::IsMember({"rk4", "euler"}));
    integ->add_option("--out", o.out, "trajectory CSV (stdout if omitted)");

    auto* integ_sparse = app.add_subcommand("integrate-sparse", "integrate the link dynamics");
    system_opts(integ_sparse);
    time_opts(integ_sparse);
    sparse_opts(integ_sparse);
    integ_sparse->add_option("--n0", o.n0, "initial node macrostate (uncorrelated links)");
    integ_sparse->add_option("--l0", o.l0, "initial link macrostate");
    integ_sparse->add_option("--record", o.record, "recording interval (0 = every step)");
    integ_sparse->add_option("--method", o.method, "rk4 | euler")
        ->check(CLI::IsMember({"rk4", "euler"}));
    integ_sparse->add_option("--out", o.out, "link trajectory CSV (stdout if omitted)");
    integ_sparse->add_option("--nodes-out", o.nodes_out, "node-marginal trajectory CSV");

    auto* abm = app.add_subcommand("abm", "agent-based ensemble and mean-field comparison");
    system_opts(abm);
    time_opts(abm);
    sparse_opts(abm);
    abm->add_option("--n0", o.n0, "initial macrostate");
    abm->add_option("--n-agents", o.n_agents, "population size");
    abm->add_option("--runs", o.runs, "independent runs");
    abm->add_option("--seed", o.seed, "random seed");
    abm->add_option("--record", o.record, "recording interval in time units");
    abm->add_option("--selection", o.selection, "edge_first | speaker_first")
        ->check(CLI::IsMember({"edge_first", "speaker_first"}));
    abm->add_option("--out", o.out, "ensemble-mean CSV");
    abm->add_option("--summary", o.summary, "ensemble summary JSON");

    auto* sweep = app.add_subcommand("sweep-committed", "bisect the committed tipping fraction");
    system_opts(sweep);
    time_opts(sweep);
    sweep->add_option("--committed", o.committed, "committed state label");
    sweep->add_option("--q-low", o.q_low, "lower bracket");
    sweep->add_option("--q-high", o.q_high, "upper bracket");
    sweep->add_option("--q-tol", o.q_tol, "bracket width to stop at");
    sweep->add_option("--threshold", o.threshold, "dominance threshold");
    sweep->add_option("--target", o.target, "state the committed agents push");
    sweep->add_option("--opposing", o.opposing, "initial consensus state");
    sweep->add_option("--out", o.out, "sweep JSON");

    auto* verify = app.add_subcommand("verify-order", "order-preservation harness");
    harness_opts(verify);

    auto* verify_sparse =
        app.add_subcommand("verify-order-sparse", "order-preservation harness on links");
    harness_opts(verify_sparse);
    sparse_opts(verify_sparse);

    auto* equil = app.add_subcommand("equilibria", "locate and classify equilibria");
    system_opts(equil);
    equil->add_option("--grid", o.grid, "seed grid density");
    equil->add_option("--fix", o.fixed, "LABEL=FRACTION for a committed state");
    equil->add_option("--out", o.out, "equilibria JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (check->parsed())
            return cmd_check(o, out);
        if (search->parsed())
            return cmd_search(o, out);
        if (type_c->parsed())
            return cmd_type_c(o, out);
        if (integ->parsed())
            return cmd_integrate(o, out);
        if (integ_sparse->parsed())
            return cmd_integrate_sparse(o, out);
        if (abm->parsed())
            return cmd_abm(o, out, err);
        if (sweep->parsed())
            return cmd_sweep(o, out);
        if (verify->parsed())
            return cmd_verify(o, out);
        if (verify_sparse->parsed())
            return cmd_verify_sparse(o, out);
        if (equil->parsed())
            return cmd_equilibria(o, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace monosig::cli
