#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "augbp/cli/bench.hpp"
#include "augbp/cli/cli.hpp"
#include "augbp/error.hpp"
#include "augbp/instance_io.hpp"
#include "support/oracles.hpp"

using namespace augbp;
using namespace augbp::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

const std::string kKarate = std::string(AUGBP_TEST_DATA_DIR) + "/karate.txt";

}  // namespace

TEST_CASE("tsp solve smoke run") {
  const auto r = invoke({"tsp", "solve", "--gen", "euclid2d", "--n", "10", "--seed", "1", "--tour"});
  CHECK(r.code == 0);
  CHECK(r.out.find("length") != std::string::npos);
  CHECK(r.out.find("ratio") != std::string::npos);
  CHECK(r.out.find("tour") != std::string::npos);
}

TEST_CASE("exit codes") {
  const auto missing = invoke({"tsp", "solve", "--file", "/nonexistent/missing.tsp"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("missing.tsp") != std::string::npos);

  const auto unknown = invoke({"tsp", "solve", "--gen", "euclid2d", "--n", "5", "--bogus"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("--bogus") != std::string::npos);
  CHECK(unknown.err.find("--damping") != std::string::npos);  // help text

  CHECK(invoke({}).code == 2);
  CHECK(invoke({"tsp"}).code == 2);
  CHECK(invoke({"tsp", "solve"}).code == 2);
  CHECK(invoke({"tsp", "solve", "--gen", "euclid2d", "--n", "5", "--damping", "0"}).code == 2);
  CHECK(invoke({"tsp", "solve", "--gen", "planar", "--n", "5"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("every tsp method solves a generated instance") {
  for (const std::string method : {"mp", "nn", "greedy", "held-karp"}) {
    const auto r = invoke({"tsp", "solve", "--gen", "random_matrix", "--n", "8", "--method", method});
    CHECK(r.code == 0);
    CHECK(r.out.find(method) != std::string::npos);
  }
  CHECK(invoke({"tsp", "solve", "--gen", "euclid2d", "--n", "8", "--literal-guard", "--tmax", "50"}).code == 0);
}

TEST_CASE("tsp gen writes TSPLIB that parses back") {
  oracle::TempDir dir("augbp-cli");
  const std::string path = dir.file("inst.tsp");
  CHECK(invoke({"tsp", "gen", "--family", "hamming20", "--n", "9", "--seed", "4", "--out", path}).code == 0);
  const auto parsed = io::parse_tsplib(io::read_file(path));
  const auto expected = io::gen_instance({io::Family::Hamming20, 9, 4});
  for (tsp::EdgeId e = 0; e < expected.num_edges(); ++e) CHECK(parsed.distance(e) == expected.distance(e));

  const auto solved = invoke({"tsp", "solve", "--file", path, "--out", dir.file("one.csv")});
  CHECK(solved.code == 0);
  const auto rows = lines_of(io::read_file(dir.file("one.csv")));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == kCsvHeader);
  CHECK(parse_csv_row(rows[1]).family == "tsplib");

  const auto printed = invoke({"tsp", "gen", "--family", "euclid2d", "--n", "4"});
  CHECK(printed.out.find("EDGE_WEIGHT_SECTION") != std::string::npos);
}

TEST_CASE("bench rows: one per method") {
  oracle::TempDir dir("augbp-bench");
  const std::string csv = dir.file("bench.csv");
  const auto r = invoke({"tsp", "bench", "--families", "euclid2d", "--sizes", "10", "--seeds", "1", "--methods",
                         "nn,greedy,mp,held-karp", "--out", csv});
  REQUIRE(r.code == 0);
  const auto rows = lines_of(io::read_file(csv));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == kCsvHeader);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const BenchRecord record = parse_csv_row(rows[i]);
    CHECK(record.status == "ok");
    CHECK(record.n == 10);
    REQUIRE(record.optimality_ratio.has_value());
    CHECK(*record.optimality_ratio >= 1.0 - 1e-12);
    CHECK(to_csv_row(record) == rows[i]);
  }
  CHECK(parse_csv_row(rows[4]).optimality_ratio == 1.0);
}

TEST_CASE("bench from a JSON config") {
  oracle::TempDir dir("augbp-json");
  const std::string config = dir.file("suite.json");
  std::ofstream(config) << R"({"families": ["random_matrix", "correlation5"], "sizes": [6, 7], "seeds": [1, 2],
    "methods": ["mp", "greedy"], "held_karp_cap": 6, "params": {"tmax": 100, "damping": 0.3}})";
  const auto r = invoke({"tsp", "bench", "--config", config, "--out", dir.file("out.csv")});
  REQUIRE(r.code == 0);
  const auto rows = lines_of(io::read_file(dir.file("out.csv")));
  CHECK(rows.size() == 1 + 2 * 2 * 2 * 2);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const BenchRecord record = parse_csv_row(rows[i]);
    CHECK(record.optimality_ratio.has_value() == (record.n == 6));
  }
  CHECK(r.out.find("runtime slope random_matrix") != std::string::npos);

  std::ofstream(dir.file("bad.json")) << R"({"families": ["nope"], "sizes": [5]})";
  CHECK(invoke({"tsp", "bench", "--config", dir.file("bad.json")}).code == 1);
  CHECK_THROWS_AS(parse_tsp_bench_config("[1, 2]"), Error);
  CHECK_THROWS_AS(parse_tsp_bench_config(R"({"params": {"damping": 5}})"), Error);
}

TEST_CASE("failing cells are recorded and the suite continues") {
  TspBenchConfig config;
  config.tsplib_files = {"/nonexistent/a.tsp"};
  config.families = {io::Family::Euclid2d};
  config.sizes = {5};
  config.seeds = {1};
  const auto result = run_tsp_bench(config);
  REQUIRE(result.records.size() == 4);
  CHECK(result.records.back().status.rfind("error:", 0) == 0);
  CHECK_FALSE(result.records.back().objective.has_value());
  CHECK(result.records.front().status == "ok");
}

TEST_CASE("cluster commands") {
  const auto full = invoke({"cluster", "solve", "--edges", kKarate, "--null", "full", "--assignment"});
  CHECK(full.code == 0);
  CHECK(full.out.find("modularity") != std::string::npos);
  CHECK(full.out.find("clique factors") != std::string::npos);

  oracle::TempDir dir("augbp-cluster");
  std::ofstream(dir.file("suite.json")) << R"({"graphs": [")" + kKarate + R"("], "nulls": ["sparse"], "seeds": [3, 4]})";
  const auto bench = invoke({"cluster", "bench", "--config", dir.file("suite.json"), "--out", dir.file("c.csv")});
  REQUIRE(bench.code == 0);
  const auto rows = lines_of(io::read_file(dir.file("c.csv")));
  REQUIRE(rows.size() == 3);
  const auto record = parse_csv_row(rows[1]);
  CHECK(record.method == "mp-sparse");
  CHECK(record.instance == "karate");
  CHECK(record.n == 34);
  CHECK(*record.objective > 0.3);

  CHECK(invoke({"cluster", "solve", "--edges", "/nonexistent/g.txt"}).code == 1);
  CHECK(invoke({"cluster", "solve", "--edges", kKarate, "--null", "dense"}).code == 2);
}

TEST_CASE("csv parsing rejects malformed rows") {
  CHECK_THROWS_AS(parse_csv_row("a,b,c"), ParseError);
  CHECK_THROWS_AS(parse_csv_row("i,f,x,mp,1,,1,1,1,0,1.0,1,ok"), ParseError);
  CHECK_THROWS_AS(parse_csv_row("i,f,3,mp,1,,1,1,1,2,1.0,1,ok"), ParseError);
  const BenchRecord blank = parse_csv_row("i,f,3,mp,,,0,0,0,0,0.000,0,error: x");
  CHECK_FALSE(blank.objective.has_value());
  CHECK(blank.status == "error: x");
}

TEST_CASE("log-log slope") {
  const std::vector<double> n{50, 100, 200, 400};
  std::vector<double> cubic;
  for (const double x : n) cubic.push_back(2.5 * x * x * x);
  CHECK(*loglog_slope(n, cubic) == doctest::Approx(3.0));
  const std::vector<double> one{10};
  CHECK_FALSE(loglog_slope(one, one).has_value());
  const std::vector<double> same{5, 5};
  const std::vector<double> ys{1, 2};
  CHECK_FALSE(loglog_slope(same, ys).has_value());
}
