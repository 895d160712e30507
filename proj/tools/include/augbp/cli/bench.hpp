#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "augbp/instance_io.hpp"
#include "augbp/modularity.hpp"
#include "augbp/tsp_solver.hpp"

namespace augbp::cli {

/// One CSV row. TSP rows use the tour length as objective and the subtour
/// factor count as constraint count; clustering rows use modularity and the
/// clique factor count.
struct BenchRecord {
  std::string instance;
  std::string family;
  std::size_t n = 0;
  std::string method;
  std::optional<double> objective;
  std::optional<double> optimality_ratio;
  std::size_t iterations = 0;
  std::size_t augmentations = 0;
  std::size_t constraint_count = 0;
  bool repaired = false;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
  /// "ok" or the error that stopped this cell.
  std::string status = "ok";

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

inline constexpr std::string_view kCsvHeader =
    "instance,family,n,method,objective,optimality_ratio,iterations,augmentations,"
    "constraint_count,repaired,wall_ms,seed,status";

std::string to_csv_row(const BenchRecord& record);
/// Inverse of to_csv_row. Throws ParseError on malformed rows.
BenchRecord parse_csv_row(std::string_view row);
void write_csv(std::ostream& out, std::span<const BenchRecord> records);

/// Least-squares slope of log(y) against log(x). Needs two distinct x and
/// positive values; returns nullopt otherwise.
std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y);

enum class TspMethod { MessagePassing, NearestNeighbour, Greedy, HeldKarp };

std::string_view to_string(TspMethod method);
std::optional<TspMethod> parse_tsp_method(std::string_view name);

struct TspBenchConfig {
  std::vector<io::Family> families;
  std::vector<std::size_t> sizes;
  std::vector<std::uint64_t> seeds;
  /// TSPLIB files benchmarked once each (seed column 0).
  std::vector<std::string> tsplib_files;
  std::vector<TspMethod> methods{TspMethod::MessagePassing, TspMethod::NearestNeighbour,
                                 TspMethod::Greedy};
  tsp::TspParams params;
  /// Held-Karp supplies the optimality ratio for n up to this size.
  std::size_t held_karp_cap = 16;
};

struct TspBenchResult {
  std::vector<BenchRecord> records;
  /// Per family: slope of the mean message-passing wall time against n.
  std::map<std::string, double> slopes;
};

TspBenchResult run_tsp_bench(const TspBenchConfig& config);

struct ClusterBenchConfig {
  std::vector<std::string> graphs;
  std::vector<cluster::NullKind> nulls{cluster::NullKind::Full, cluster::NullKind::Sparse};
  std::vector<std::uint64_t> seeds{1};
  cluster::ClusterParams params;
};

std::vector<BenchRecord> run_cluster_bench(const ClusterBenchConfig& config);

/// JSON schema: {"families": [..], "sizes": [..], "seeds": [..],
/// "methods": [..], "tsplib": [paths], "held_karp_cap": int,
/// "params": {"tmax", "damping", "decimation_frac", "eps_scale",
/// "max_aug", "literal_guard", "repair"}}. Throws Error on bad input.
TspBenchConfig parse_tsp_bench_config(std::string_view json_text);

/// JSON schema: {"graphs": [paths], "nulls": ["full", "sparse"],
/// "seeds": [..], "params": {"tmax", "damping", "alpha", "eps_scale",
/// "max_aug", "literal_guard"}}. Relative graph paths resolve against
/// `base_dir`.
ClusterBenchConfig parse_cluster_bench_config(std::string_view json_text,
                                              const std::string& base_dir = {});

}  // namespace augbp::cli
