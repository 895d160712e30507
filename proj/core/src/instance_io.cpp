#include "augbp/instance_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <unordered_map>

#include "augbp/error.hpp"
#include "augbp/rng.hpp"

namespace augbp::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::optional<double> to_double(std::string_view token) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

/// Splits text into lines while tracking 1-based line numbers.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    const auto end = text_.find('\n', pos_);
    const std::size_t stop = end == std::string_view::npos ? text_.size() : end;
    line = text_.substr(pos_, stop - pos_);
    pos_ = stop + 1;
    ++number_;
    return true;
  }

  std::size_t number() const { return number_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

/// Reads whitespace-separated numbers spanning lines until `count` are read.
std::vector<double> read_numbers(LineReader& reader, std::size_t count, const char* section) {
  std::vector<double> values;
  values.reserve(count);
  std::string_view line;
  while (values.size() < count) {
    if (!reader.next(line)) {
      throw ParseError(reader.number(), std::string(section) + " ended after " + std::to_string(values.size()) +
                                            " of " + std::to_string(count) + " values");
    }
    const auto trimmed = trim(line);
    if (trimmed == "EOF") {
      throw ParseError(reader.number(), std::string(section) + " ended after " + std::to_string(values.size()) +
                                            " of " + std::to_string(count) + " values");
    }
    for (auto token : split_ws(trimmed)) {
      const auto value = to_double(token);
      if (!value) throw ParseError(reader.number(), "not a number: '" + std::string(token) + "'");
      if (values.size() == count) throw ParseError(reader.number(), std::string(section) + " has too many values");
      values.push_back(*value);
    }
  }
  return values;
}

// TSPLIB nearest-integer rounding.
double nint(double x) { return std::floor(x + 0.5); }

}  // namespace

TsplibProblem parse_tsplib_problem(std::string_view text) {
  TsplibProblem problem;
  bool have_dimension = false;
  bool have_type = false;
  LineReader reader(text);
  std::string_view line;
  while (reader.next(line)) {
    const auto trimmed = trim(line);
    if (trimmed.empty()) continue;
    if (trimmed == "EOF") break;

    if (trimmed == "NODE_COORD_SECTION") {
      if (!have_dimension) throw ParseError(reader.number(), "NODE_COORD_SECTION before DIMENSION");
      problem.coords.assign(problem.dimension, {0.0, 0.0});
      std::vector<char> seen(problem.dimension, 0);
      for (std::size_t read = 0; read < problem.dimension; ++read) {
        if (!reader.next(line) || trim(line) == "EOF") {
          throw ParseError(reader.number(), "NODE_COORD_SECTION has " + std::to_string(read) +
                                                " entries but DIMENSION is " + std::to_string(problem.dimension));
        }
        const auto tokens = split_ws(trim(line));
        if (tokens.size() != 3) throw ParseError(reader.number(), "expected 'index x y'");
        const auto idx = to_double(tokens[0]);
        const auto x = to_double(tokens[1]);
        const auto y = to_double(tokens[2]);
        if (!idx || !x || !y) throw ParseError(reader.number(), "malformed coordinate line");
        const auto i = static_cast<long long>(*idx);
        if (i < 1 || static_cast<std::size_t>(i) > problem.dimension || seen[i - 1]) {
          throw ParseError(reader.number(), "node index " + std::to_string(i) + " does not match DIMENSION " +
                                                std::to_string(problem.dimension));
        }
        seen[i - 1] = 1;
        problem.coords[i - 1] = {*x, *y};
      }
      continue;
    }

    if (trimmed == "EDGE_WEIGHT_SECTION") {
      if (!have_dimension) throw ParseError(reader.number(), "EDGE_WEIGHT_SECTION before DIMENSION");
      const std::size_t n = problem.dimension;
      if (problem.weight_format == WeightFormat::FullMatrix) {
        problem.matrix = read_numbers(reader, n * n, "EDGE_WEIGHT_SECTION");
      } else if (problem.weight_format == WeightFormat::UpperRow) {
        const auto upper = read_numbers(reader, n * (n - 1) / 2, "EDGE_WEIGHT_SECTION");
        problem.matrix.assign(n * n, 0.0);
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = i + 1; j < n; ++j, ++k) {
            problem.matrix[i * n + j] = upper[k];
            problem.matrix[j * n + i] = upper[k];
          }
        }
      } else {
        throw ParseError(reader.number(), "EDGE_WEIGHT_SECTION requires EDGE_WEIGHT_FORMAT");
      }
      continue;
    }

    const auto colon = trimmed.find(':');
    if (colon == std::string_view::npos) throw ParseError(reader.number(), "unexpected line '" + std::string(trimmed) + "'");
    const auto key = trim(trimmed.substr(0, colon));
    const auto value = trim(trimmed.substr(colon + 1));
    if (key == "NAME") {
      problem.name = std::string(value);
    } else if (key == "TYPE") {
      if (value != "TSP") throw UnsupportedFormat("unsupported problem TYPE '" + std::string(value) + "'");
    } else if (key == "DIMENSION") {
      const auto d = to_double(value);
      if (!d || *d < 1 || *d != std::floor(*d)) throw ParseError(reader.number(), "bad DIMENSION");
      problem.dimension = static_cast<std::size_t>(*d);
      have_dimension = true;
    } else if (key == "EDGE_WEIGHT_TYPE") {
      if (value == "EUC_2D") {
        problem.weight_type = WeightType::Euc2d;
      } else if (value == "GEO") {
        problem.weight_type = WeightType::Geo;
      } else if (value == "EXPLICIT") {
        problem.weight_type = WeightType::Explicit;
      } else {
        throw UnsupportedFormat("unsupported EDGE_WEIGHT_TYPE '" + std::string(value) + "'");
      }
      have_type = true;
    } else if (key == "EDGE_WEIGHT_FORMAT") {
      if (value == "FULL_MATRIX") {
        problem.weight_format = WeightFormat::FullMatrix;
      } else if (value == "UPPER_ROW") {
        problem.weight_format = WeightFormat::UpperRow;
      } else if (value == "FUNCTION") {
        problem.weight_format = WeightFormat::None;
      } else {
        throw UnsupportedFormat("unsupported EDGE_WEIGHT_FORMAT '" + std::string(value) + "'");
      }
    }
    // Other keys (COMMENT, DISPLAY_DATA_TYPE, ...) carry nothing we use.
  }

  if (!have_dimension) throw ParseError(reader.number(), "missing DIMENSION");
  if (!have_type) throw ParseError(reader.number(), "missing EDGE_WEIGHT_TYPE");
  if (problem.weight_type == WeightType::Explicit) {
    if (problem.matrix.empty()) throw ParseError(reader.number(), "missing EDGE_WEIGHT_SECTION");
  } else if (problem.coords.empty()) {
    throw ParseError(reader.number(), "missing NODE_COORD_SECTION");
  }
  return problem;
}

double tsplib_geo_distance(std::pair<double, double> a, std::pair<double, double> b) {
  constexpr double kPi = 3.141592;
  constexpr double kRadius = 6378.388;
  // DDD.MM: integer degrees plus minutes in the fractional part.
  auto radians = [](double x) {
    const double deg = std::trunc(x);
    const double min = x - deg;
    return kPi * (deg + 5.0 * min / 3.0) / 180.0;
  };
  const double lat_a = radians(a.first);
  const double lon_a = radians(a.second);
  const double lat_b = radians(b.first);
  const double lon_b = radians(b.second);
  const double q1 = std::cos(lon_a - lon_b);
  const double q2 = std::cos(lat_a - lat_b);
  const double q3 = std::cos(lat_a + lat_b);
  return std::trunc(kRadius * std::acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0);
}

tsp::TspInstance to_instance(const TsplibProblem& problem) {
  const std::size_t n = problem.dimension;
  switch (problem.weight_type) {
    case WeightType::Explicit:
      return tsp::TspInstance::from_matrix(n, problem.matrix, problem.name);
    case WeightType::Euc2d:
      return tsp::TspInstance::from_function(
          n,
          [&](tsp::NodeId u, tsp::NodeId v) {
            const double dx = problem.coords[u].first - problem.coords[v].first;
            const double dy = problem.coords[u].second - problem.coords[v].second;
            return nint(std::sqrt(dx * dx + dy * dy));
          },
          problem.name);
    case WeightType::Geo:
      return tsp::TspInstance::from_function(
          n, [&](tsp::NodeId u, tsp::NodeId v) { return tsplib_geo_distance(problem.coords[u], problem.coords[v]); },
          problem.name);
  }
  throw UnsupportedFormat("unknown weight type");
}

tsp::TspInstance parse_tsplib(std::string_view text) { return to_instance(parse_tsplib_problem(text)); }

std::string write_tsplib(const tsp::TspInstance& instance) {
  std::ostringstream out;
  const std::size_t n = instance.num_nodes();
  out << "NAME : " << (instance.name().empty() ? "instance" : instance.name()) << '\n'
      << "TYPE : TSP\n"
      << "DIMENSION : " << n << '\n'
      << "EDGE_WEIGHT_TYPE : EXPLICIT\n"
      << "EDGE_WEIGHT_FORMAT : FULL_MATRIX\n"
      << "EDGE_WEIGHT_SECTION\n";
  out << std::setprecision(17);
  for (tsp::NodeId u = 0; u < n; ++u) {
    for (tsp::NodeId v = 0; v < n; ++v) {
      if (v > 0) out << ' ';
      out << instance.distance(u, v);
    }
    out << '\n';
  }
  out << "EOF\n";
  return out.str();
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Euclid2d:
      return "euclid2d";
    case Family::RandomMatrix:
      return "random_matrix";
    case Family::Hamming20:
      return "hamming20";
    case Family::Correlation5:
      return "correlation5";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
  for (auto f : {Family::Euclid2d, Family::RandomMatrix, Family::Hamming20, Family::Correlation5}) {
    if (name == to_string(f)) return f;
  }
  return std::nullopt;
}

tsp::TspInstance gen_instance(const GeneratorSpec& spec) {
  if (spec.n < 3) throw InvalidInstance("generated instances need n >= 3");
  Rng rng(spec.seed);
  const std::size_t n = spec.n;
  std::string name = std::string(to_string(spec.family)) + "-n" + std::to_string(n) + "-s" + std::to_string(spec.seed);
  switch (spec.family) {
    case Family::Euclid2d: {
      std::vector<std::pair<double, double>> pts(n);
      for (auto& p : pts) {
        p.first = rng.uniform01();
        p.second = rng.uniform01();
      }
      return tsp::TspInstance::from_function(
          n,
          [&](tsp::NodeId u, tsp::NodeId v) { return std::hypot(pts[u].first - pts[v].first, pts[u].second - pts[v].second); },
          std::move(name));
    }
    case Family::RandomMatrix: {
      std::vector<double> d(n * (n - 1) / 2);
      for (auto& x : d) x = rng.uniform01();
      return tsp::TspInstance(n, std::move(d), std::move(name));
    }
    case Family::Hamming20: {
      std::vector<std::uint32_t> bits(n);
      for (auto& b : bits) b = static_cast<std::uint32_t>(rng.next() & 0xFFFFFu);
      return tsp::TspInstance::from_function(
          n, [&](tsp::NodeId u, tsp::NodeId v) { return static_cast<double>(std::popcount(bits[u] ^ bits[v])); },
          std::move(name));
    }
    case Family::Correlation5: {
      constexpr std::size_t kFeatures = 5;
      std::vector<std::array<double, kFeatures>> centred(n);
      for (auto& row : centred) {
        double mean = 0.0;
        for (auto& x : row) {
          x = rng.uniform01();
          mean += x;
        }
        mean /= kFeatures;
        double norm = 0.0;
        for (auto& x : row) {
          x -= mean;
          norm += x * x;
        }
        norm = std::sqrt(norm);
        for (auto& x : row) x /= norm;
      }
      return tsp::TspInstance::from_function(
          n,
          [&](tsp::NodeId u, tsp::NodeId v) {
            double r = 0.0;
            for (std::size_t k = 0; k < kFeatures; ++k) r += centred[u][k] * centred[v][k];
            return std::max(0.0, 1.0 - r);
          },
          std::move(name));
    }
  }
  throw InvalidInstance("unknown generator family");
}

cluster::WeightedGraph parse_edge_list(std::string_view text) {
  cluster::WeightedGraph graph;
  std::unordered_map<std::string, cluster::NodeId> ids;
  std::map<std::pair<cluster::NodeId, cluster::NodeId>, double> weights;
  std::vector<std::pair<cluster::NodeId, cluster::NodeId>> order;
  auto intern = [&](std::string_view name) {
    const auto [it, fresh] = ids.emplace(std::string(name), static_cast<cluster::NodeId>(graph.labels.size()));
    if (fresh) graph.labels.emplace_back(name);
    return it->second;
  };
  LineReader reader(text);
  std::string_view line;
  while (reader.next(line)) {
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split_ws(trim(line));
    if (tokens.empty()) continue;
    if (tokens.size() < 2 || tokens.size() > 3) throw ParseError(reader.number(), "expected 'u v [weight]'");
    double w = 1.0;
    if (tokens.size() == 3) {
      const auto parsed = to_double(tokens[2]);
      if (!parsed) throw ParseError(reader.number(), "weight is not a number: '" + std::string(tokens[2]) + "'");
      if (!(*parsed > 0.0) || !std::isfinite(*parsed)) throw ParseError(reader.number(), "weight must be positive");
      w = *parsed;
    }
    if (tokens[0] == tokens[1]) {
      throw InvalidInstance("line " + std::to_string(reader.number()) + ": self-loop on '" + std::string(tokens[0]) + "'");
    }
    const auto a = intern(tokens[0]);
    const auto b = intern(tokens[1]);
    const auto key = std::minmax(a, b);
    const auto [it, fresh] = weights.emplace(key, 0.0);
    if (fresh) order.push_back(key);
    it->second += w;
  }
  graph.n = graph.labels.size();
  graph.edges.reserve(order.size());
  for (const auto& key : order) graph.edges.push_back({key.first, key.second, weights[key]});
  return graph;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace augbp::io
