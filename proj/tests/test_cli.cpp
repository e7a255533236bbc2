#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "monosig/cli.hpp"
#include "monosig/io.hpp"

using namespace monosig;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "monosig");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("monosig_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<double> last_row(const std::string& csv)
{
    std::istringstream in(csv);
    std::string line, last;
    while (std::getline(in, line))
        if (!line.empty())
            last = line;
    std::vector<double> out;
    std::istringstream row(last);
    std::string cell;
    while (std::getline(row, cell, ','))
        out.push_back(std::stod(cell));
    return out;
}

} // namespace

TEST_CASE("builders and argument parsing")
{
    CHECK(cli::build("long").size() == 3);
    CHECK(cli::build("kng:4").size() == 5);
    CHECK(cli::build("counterexample").gB(2, 0) == 1.0);
    const auto c = cli::build("committed:A,B");
    CHECK(c.size() == 5);
    CHECK(c.committed.size() == 2);
    CHECK(cli::build("committed:2@kng:2").size() == 4);
    CHECK_THROWS_AS(cli::build("nope"), InvalidParameter);
    CHECK_THROWS_AS(cli::build("kng:x"), InvalidParameter);
    CHECK_THROWS_AS(cli::build("kng:0"), InvalidParameter);

    CHECK(cli::parse_vector("0.6, 0 ,0.4") == Eigen::Vector3d(0.6, 0, 0.4));
    CHECK_THROWS_AS(cli::parse_vector("0.6,,x"), InvalidParameter);
    CHECK(cli::parse_chain("B,AB,A", c.spins).less(2, 0));
}

TEST_CASE("search-order")
{
    const auto ok = invoke({"search-order", "--builder", "long"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("verdict: CertifiedMonotone") != std::string::npos);
    CHECK(ok.out.find("order: B < AB < A") != std::string::npos);

    const auto none = invoke({"search-order", "--builder", "counterexample"});
    CHECK(none.code == 0);
    CHECK(none.out.find("verdict: NoOrderExists") != std::string::npos);
    CHECK(invoke({"search-order", "--builder", "counterexample", "--strict"}).code == 2);
}

TEST_CASE("check writes a report")
{
    const fs::path dir = scratch_dir("check");
    const auto r = invoke({"check", "--builder", "committed:A,B", "--chain", "B,AB,A",
                           "--out", (dir / "r.json").string()});
    CHECK(r.code == 0);
    const Json doc = read_json(dir / "r.json");
    CHECK(doc["verdict"] == "CertifiedMonotone");
    fs::remove_all(dir);
}

TEST_CASE("integrate")
{
    const auto r =
        invoke({"integrate", "--builder", "long", "--n0", "0.6,0,0.4", "--t-end", "50"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("t,A,AB,B\n", 0) == 0);
    const auto row = last_row(r.out);
    REQUIRE(row.size() == 4);
    CHECK(row[0] == 50.0);
    CHECK(std::abs(row[1] - 1.0) <= 1e-6);
    CHECK(row[2] <= 1e-6);
    CHECK(row[3] <= 1e-6);

    CHECK(invoke({"integrate", "--builder", "long", "--n0", "0.6,0.1,0.4"}).code == 1);
    CHECK(invoke({"integrate", "--builder", "long"}).code == 1);
}

TEST_CASE("invalid input leaves no partial output")
{
    const fs::path dir = scratch_dir("partial");
    {
        std::ofstream bad(dir / "sys.json");
        bad << "{\"labels\": [\"A\", \"B\"], \"alpha\": [1, 0], ";
    }
    const fs::path out = dir / "traj.csv";
    const auto r = invoke({"integrate", "--system", (dir / "sys.json").string(), "--n0", "0.5,0.5",
                           "--out", out.string()});
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(r.err.find("error") != std::string::npos);
    CHECK(!fs::exists(out));
    fs::remove_all(dir);
}

TEST_CASE("system documents from disk")
{
    const fs::path dir = scratch_dir("system");
    write_file_atomic(dir / "kng.json", to_json(cli::build("kng:3")).dump());
    const auto r = invoke({"check", "--system", (dir / "kng.json").string(), "--chain", "0,1,2,3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("CertifiedMonotone") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("usage errors")
{
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"frobnicate"}).code == 1);
    CHECK(invoke({"check", "--builder", "long", "--system", "x.json", "--chain", "B,AB,A"}).code ==
          1);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("small ensemble summary")
{
    const fs::path dir = scratch_dir("abm");
    const auto r = invoke({"abm", "--builder", "long", "--n0", "0.6,0,0.4", "--n-agents", "500",
                           "--runs", "3", "--t-end", "2", "--out", (dir / "m.csv").string(),
                           "--summary", (dir / "s.json").string()});
    CHECK(r.code == 0);
    const Json doc = read_json(dir / "s.json");
    CHECK(doc["runs"] == 3);
    CHECK(doc["supDeviation"].get<double>() >= 0.0);
    CHECK(fs::exists(dir / "m.csv"));
    fs::remove_all(dir);
}

TEST_CASE("equilibria and sweep commands")
{
    const auto e = invoke({"equilibria", "--builder", "long"});
    CHECK(e.code == 0);
    CHECK(e.out.find("Saddle") != std::string::npos);

    const auto s = invoke({"sweep-committed", "--builder", "committed:A", "--dt", "1e-2",
                           "--q-tol", "1e-3"});
    CHECK(s.code == 0);
    CHECK(s.out.find("qc") != std::string::npos);
    CHECK(invoke({"sweep-committed", "--builder", "committed:A", "--dt", "1e-2", "--q-low", "0.2",
                  "--q-high", "0.3"})
              .code == 1);
}
