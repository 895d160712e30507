#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "augbp/modularity.hpp"
#include "augbp/tsp_instance.hpp"

namespace augbp::io {

enum class WeightType { Euc2d, Geo, Explicit };
enum class WeightFormat { None, FullMatrix, UpperRow };

/// The subset of TSPLIB this library reads.
struct TsplibProblem {
  std::string name;
  std::size_t dimension = 0;
  WeightType weight_type = WeightType::Euc2d;
  WeightFormat weight_format = WeightFormat::None;
  std::vector<std::pair<double, double>> coords;
  /// Row-major dimension x dimension, filled for EXPLICIT problems.
  std::vector<double> matrix;
};

/// Throws ParseError (with line number) or UnsupportedFormat.
TsplibProblem parse_tsplib_problem(std::string_view text);
tsp::TspInstance to_instance(const TsplibProblem& problem);
tsp::TspInstance parse_tsplib(std::string_view text);

/// EXPLICIT / FULL_MATRIX with round-trip precision.
std::string write_tsplib(const tsp::TspInstance& instance);

/// TSPLIB great-circle distance between DDD.MM coordinates (rounded up).
double tsplib_geo_distance(std::pair<double, double> a, std::pair<double, double> b);

enum class Family { Euclid2d, RandomMatrix, Hamming20, Correlation5 };

std::string_view to_string(Family family);
std::optional<Family> parse_family(std::string_view name);

struct GeneratorSpec {
  Family family = Family::Euclid2d;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// Deterministic in (family, n, seed). Throws InvalidInstance for n < 3.
tsp::TspInstance gen_instance(const GeneratorSpec& spec);

/// "u v [w]" per line, '#' comments, blank lines ignored. Node names are
/// compacted to 0..n-1 in order of first appearance; repeated pairs sum.
cluster::WeightedGraph parse_edge_list(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace augbp::io
