#include "monosig/io.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace monosig {

namespace {

Json vector_json(const Eigen::VectorXd& v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

Json columns_json(const Eigen::MatrixXd& m)
{
    Json out = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        out.push_back(vector_json(m.col(j)));
    return out;
}

const Json& field(const Json& doc, const char* key)
{
    if (!doc.is_object())
        throw InvalidInput("expected a JSON object");
    const auto it = doc.find(key);
    if (it == doc.end())
        throw InvalidInput(std::string("missing field \"") + key + "\"");
    return *it;
}

double number(const Json& v, const std::string& where)
{
    if (!v.is_number())
        throw InvalidInput(where + " must be a number");
    return v.get<double>();
}

Eigen::VectorXd read_vector(const Json& v, std::size_t K, const std::string& where)
{
    if (!v.is_array() || v.size() != K)
        throw InvalidInput(where + " must be an array of " + std::to_string(K) + " numbers");
    Eigen::VectorXd out(static_cast<Eigen::Index>(K));
    for (std::size_t i = 0; i < K; ++i)
        out(static_cast<Eigen::Index>(i)) = number(v[i], where + "[" + std::to_string(i) + "]");
    return out;
}

Eigen::MatrixXd read_columns(const Json& v, std::size_t K, const std::string& where)
{
    if (!v.is_array() || v.size() != K)
        throw InvalidInput(where + " must be an array of " + std::to_string(K) + " columns");
    Eigen::MatrixXd out(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
    for (std::size_t j = 0; j < K; ++j)
        out.col(static_cast<Eigen::Index>(j)) =
            read_vector(v[j], K, where + " column " + std::to_string(j));
    return out;
}

std::string label_of(const Json& v, const std::string& where)
{
    if (!v.is_string())
        throw InvalidInput(where + " must be a string label");
    return v.get<std::string>();
}

} // namespace

Json to_json(const SignallingSystem& system)
{
    Json doc;
    doc["labels"] = system.spins.labels();
    doc["alpha"] = vector_json(system.alpha);
    doc["gA"] = columns_json(system.gA);
    doc["gB"] = columns_json(system.gB);
    Json committed = Json::array();
    for (auto c : system.committed)
        committed.push_back(system.spins.label(c));
    doc["committed"] = committed;
    return doc;
}

SignallingSystem system_from_json(const Json& doc)
{
    const Json& labels = field(doc, "labels");
    if (!labels.is_array() || labels.empty())
        throw InvalidInput("labels must be a nonempty array");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < labels.size(); ++i)
        names.push_back(label_of(labels[i], "labels[" + std::to_string(i) + "]"));

    SignallingSystem s;
    try {
        s.spins = SpinSpace(std::move(names));
    } catch (const InvalidParameter& e) {
        throw InvalidInput(e.what());
    }
    const auto K = s.size();
    s.alpha = read_vector(field(doc, "alpha"), K, "alpha");
    s.gA = read_columns(field(doc, "gA"), K, "gA");
    s.gB = read_columns(field(doc, "gB"), K, "gB");
    if (const auto it = doc.find("committed"); it != doc.end()) {
        if (!it->is_array())
            throw InvalidInput("committed must be an array of labels");
        for (const auto& c : *it) {
            const auto idx = s.spins.find(label_of(c, "committed entry"));
            if (!idx)
                throw InvalidInput("committed label \"" + c.get<std::string>() + "\" is unknown");
            s.committed.push_back(*idx);
        }
    }
    require_valid(s);
    return s;
}

Json to_json(const PartialOrder& order, const SpinSpace& spins)
{
    Json edges = Json::array();
    for (auto [lo, hi] : order.covering_pairs())
        edges.push_back(Json::array({spins.label(lo), spins.label(hi)}));
    Json doc;
    doc["edges"] = edges;
    return doc;
}

PartialOrder order_from_json(const Json& doc, const SpinSpace& spins)
{
    const Json& edges = field(doc, "edges");
    if (!edges.is_array())
        throw InvalidInput("edges must be an array of [less, greater] pairs");
    std::vector<Edge> list;
    for (const auto& e : edges) {
        if (!e.is_array() || e.size() != 2)
            throw InvalidInput("each edge must be a [less, greater] pair");
        const auto lo = spins.find(label_of(e[0], "edge endpoint"));
        const auto hi = spins.find(label_of(e[1], "edge endpoint"));
        if (!lo || !hi)
            throw InvalidInput("edge [" + e[0].get<std::string>() + ", " +
                               e[1].get<std::string>() + "] names an unknown state");
        list.emplace_back(*lo, *hi);
    }
    return PartialOrder::from_edges(spins.size(), list);
}

Json to_json(const MonotonicityReport& report, const SpinSpace& spins)
{
    Json doc;
    doc["verdict"] = to_string(report.verdict);
    if (report.order) {
        doc["order"] = to_json(*report.order, spins);
        doc["orderDescription"] = describe(*report.order, spins.labels());
    } else {
        doc["order"] = nullptr;
    }
    Json conditions = Json::array();
    for (const auto& c : report.conditions) {
        Json j;
        j["name"] = c.name;
        j["pass"] = c.pass;
        j["witness"] = c.witness;
        j["margin"] = c.margin ? Json(*c.margin) : Json(nullptr);
        conditions.push_back(j);
    }
    doc["conditions"] = conditions;
    doc["ordersExamined"] = report.orders_examined;
    doc["note"] = report.note;
    return doc;
}

Json to_json(const SweepResult& sweep)
{
    Json doc;
    doc["qc"] = sweep.qc;
    doc["bracket"] = Json::array({sweep.lo, sweep.hi});
    doc["target"] = sweep.target;
    doc["opposing"] = sweep.opposing;
    Json points = Json::array();
    for (const auto& p : sweep.classifications) {
        Json j;
        j["q"] = p.q;
        j["dominant"] = p.dominant;
        j["targetMass"] = p.target_mass;
        j["terminal"] = vector_json(p.terminal);
        points.push_back(j);
    }
    doc["classifications"] = points;
    return doc;
}

Json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

std::string format_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
    return buf;
}

void write_csv(std::ostream& out, const Trajectory& traj, const std::vector<std::string>& labels)
{
    out << 't';
    for (const auto& l : labels)
        out << ',' << l;
    out << '\n';
    for (std::size_t r = 0; r < traj.size(); ++r) {
        if (static_cast<std::size_t>(traj.states[r].size()) != labels.size())
            throw InvalidInput("trajectory state and label counts differ");
        out << format_number(traj.times[r]);
        for (Eigen::Index i = 0; i < traj.states[r].size(); ++i)
            out << ',' << format_number(traj.states[r](i));
        out << '\n';
    }
}

std::string to_csv(const Trajectory& traj, const std::vector<std::string>& labels)
{
    std::ostringstream out;
    write_csv(out, traj, labels);
    return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::random_device rd;
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(rd()));
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
            throw InvalidInput("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp);
            throw InvalidInput("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw InvalidInput("cannot replace " + path.string() + ": " + ec.message());
    }
}

} // namespace monosig
