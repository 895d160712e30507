#include "augbp/cli/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "augbp/baselines.hpp"
#include "augbp/error.hpp"

namespace augbp::cli {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string format_real(double value) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << value;
  return os.str();
}

// Fields are never quoted, so separators inside free text are replaced.
std::string sanitize(std::string text) {
  for (char& c : text) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

std::vector<std::string_view> split_fields(std::string_view row) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = row.find(',', start);
    fields.push_back(row.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
T parse_integer(std::string_view text, const char* field) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw ParseError(1, std::string("bad integer in column ") + field);
  }
  return value;
}

double parse_real(std::string_view text, const char* field) {
  std::istringstream is{std::string(text)};
  is.imbue(std::locale::classic());
  double value = 0.0;
  if (!(is >> value) || !is.eof()) throw ParseError(1, std::string("bad number in column ") + field);
  return value;
}

std::optional<double> parse_optional_real(std::string_view text, const char* field) {
  if (text.empty()) return std::nullopt;
  return parse_real(text, field);
}

BenchRecord failed_record(BenchRecord record, const std::exception& error) {
  record.objective.reset();
  record.optimality_ratio.reset();
  record.status = sanitize(std::string("error: ") + error.what());
  return record;
}

BenchRecord run_tsp_method(const tsp::TspInstance& instance, TspMethod method,
                           const tsp::TspParams& params, BenchRecord record) {
  const auto start = Clock::now();
  switch (method) {
    case TspMethod::MessagePassing: {
      const tsp::TspReport report = tsp::solve(instance, params);
      record.wall_ms = report.wall_ms;
      record.iterations = report.bp_iterations;
      record.augmentations = report.augmentations;
      record.constraint_count = report.subtour_factors;
      record.repaired = report.repaired;
      if (!report.ok) {
        record.status = sanitize("error: " + report.failure);
        return record;
      }
      record.objective = report.tour.length;
      return record;
    }
    case TspMethod::NearestNeighbour:
      record.objective = tsp::nearest_neighbour_best(instance).tour.length;
      break;
    case TspMethod::Greedy:
      record.objective = tsp::greedy_edge(instance).tour.length;
      break;
    case TspMethod::HeldKarp:
      record.objective = tsp::held_karp_exact(instance).tour.length;
      break;
  }
  record.wall_ms = ms_since(start);
  return record;
}

void bench_instance(const tsp::TspInstance& instance, const std::string& family, std::uint64_t seed,
                    const TspBenchConfig& config, std::vector<BenchRecord>& out) {
  const std::size_t n = instance.num_nodes();
  std::optional<double> optimum;
  if (n <= config.held_karp_cap && n <= tsp::kHeldKarpMaxNodes) {
    optimum = tsp::held_karp_exact(instance).tour.length;
  }
  for (const TspMethod method : config.methods) {
    BenchRecord record;
    record.instance = sanitize(instance.name());
    record.family = family;
    record.n = n;
    record.method = std::string(to_string(method));
    record.seed = seed;
    try {
      record = run_tsp_method(instance, method, config.params, record);
    } catch (const std::exception& error) {
      out.push_back(failed_record(record, error));
      continue;
    }
    if (record.objective && optimum) {
      record.optimality_ratio = *optimum > 0.0 ? *record.objective / *optimum : 1.0;
    }
    out.push_back(std::move(record));
  }
}

template <typename T>
std::vector<T> read_list(const json& doc, const char* key, std::vector<T> fallback) {
  if (!doc.contains(key)) return fallback;
  const json& node = doc.at(key);
  if (!node.is_array()) throw Error(std::string("config key '") + key + "' must be an array");
  return node.get<std::vector<T>>();
}

json parse_json(std::string_view text) {
  try {
    json doc = json::parse(text);
    if (!doc.is_object()) throw Error("config must be a JSON object");
    return doc;
  } catch (const json::exception& error) {
    throw Error(std::string("invalid JSON config: ") + error.what());
  }
}

}  // namespace

std::string to_csv_row(const BenchRecord& r) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << sanitize(r.instance) << ',' << sanitize(r.family) << ',' << r.n << ',' << sanitize(r.method) << ','
     << (r.objective ? format_real(*r.objective) : "") << ','
     << (r.optimality_ratio ? format_real(*r.optimality_ratio) : "") << ',' << r.iterations << ','
     << r.augmentations << ',' << r.constraint_count << ',' << (r.repaired ? 1 : 0) << ',' << std::fixed
     << std::setprecision(3) << r.wall_ms << ',' << r.seed << ',' << sanitize(r.status);
  return os.str();
}

BenchRecord parse_csv_row(std::string_view row) {
  if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
  const auto f = split_fields(row);
  if (f.size() != 13) throw ParseError(1, "expected 13 columns, found " + std::to_string(f.size()));
  BenchRecord r;
  r.instance = f[0];
  r.family = f[1];
  r.n = parse_integer<std::size_t>(f[2], "n");
  r.method = f[3];
  r.objective = parse_optional_real(f[4], "objective");
  r.optimality_ratio = parse_optional_real(f[5], "optimality_ratio");
  r.iterations = parse_integer<std::size_t>(f[6], "iterations");
  r.augmentations = parse_integer<std::size_t>(f[7], "augmentations");
  r.constraint_count = parse_integer<std::size_t>(f[8], "constraint_count");
  const int repaired = parse_integer<int>(f[9], "repaired");
  if (repaired != 0 && repaired != 1) throw ParseError(1, "repaired must be 0 or 1");
  r.repaired = repaired == 1;
  r.wall_ms = parse_real(f[10], "wall_ms");
  r.seed = parse_integer<std::uint64_t>(f[11], "seed");
  r.status = f[12];
  return r;
}

void write_csv(std::ostream& out, std::span<const BenchRecord> records) {
  out << kCsvHeader << '\n';
  for (const auto& record : records) out << to_csv_row(record) << '\n';
}

std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::nullopt;
    mean_x += std::log(x[i]);
    mean_y += std::log(y[i]);
  }
  mean_x /= static_cast<double>(x.size());
  mean_y /= static_cast<double>(x.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mean_x;
    sxy += dx * (std::log(y[i]) - mean_y);
    sxx += dx * dx;
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

std::string_view to_string(TspMethod method) {
  switch (method) {
    case TspMethod::MessagePassing:
      return "mp";
    case TspMethod::NearestNeighbour:
      return "nn";
    case TspMethod::Greedy:
      return "greedy";
    case TspMethod::HeldKarp:
      return "held-karp";
  }
  return "?";
}

std::optional<TspMethod> parse_tsp_method(std::string_view name) {
  for (const TspMethod m : {TspMethod::MessagePassing, TspMethod::NearestNeighbour, TspMethod::Greedy,
                            TspMethod::HeldKarp}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

TspBenchResult run_tsp_bench(const TspBenchConfig& config) {
  config.params.validate();
  TspBenchResult result;
  for (const io::Family family : config.families) {
    for (const std::size_t n : config.sizes) {
      for (const std::uint64_t seed : config.seeds) {
        const tsp::TspInstance instance = io::gen_instance({family, n, seed});
        bench_instance(instance, std::string(io::to_string(family)), seed, config, result.records);
      }
    }
  }
  for (const std::string& path : config.tsplib_files) {
    try {
      const tsp::TspInstance instance = io::parse_tsplib(io::read_file(path));
      bench_instance(instance, "tsplib", 0, config, result.records);
    } catch (const std::exception& error) {
      BenchRecord record;
      record.instance = std::filesystem::path(path).filename().string();
      record.family = "tsplib";
      record.method = "load";
      result.records.push_back(failed_record(record, error));
    }
  }

  std::map<std::string, std::map<std::size_t, std::vector<double>>> times;
  for (const auto& record : result.records) {
    if (record.method != to_string(TspMethod::MessagePassing) || record.status != "ok") continue;
    times[record.family][record.n].push_back(record.wall_ms);
  }
  for (const auto& [family, by_n] : times) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& [n, samples] : by_n) {
      double total = 0.0;
      for (const double t : samples) total += t;
      xs.push_back(static_cast<double>(n));
      ys.push_back(total / static_cast<double>(samples.size()));
    }
    if (const auto slope = loglog_slope(xs, ys)) result.slopes[family] = *slope;
  }
  return result;
}

std::vector<BenchRecord> run_cluster_bench(const ClusterBenchConfig& config) {
  config.params.validate();
  std::vector<BenchRecord> records;
  for (const std::string& path : config.graphs) {
    const std::string name = std::filesystem::path(path).stem().string();
    std::optional<cluster::WeightedGraph> graph;
    std::string load_error;
    try {
      graph = io::parse_edge_list(io::read_file(path));
    } catch (const std::exception& error) {
      load_error = error.what();
    }
    for (const cluster::NullKind kind : config.nulls) {
      for (const std::uint64_t seed : config.seeds) {
        BenchRecord record;
        record.instance = sanitize(name);
        record.family = "graph";
        record.method = kind == cluster::NullKind::Full ? "mp-full" : "mp-sparse";
        record.seed = seed;
        if (!graph) {
          record.status = sanitize("error: " + load_error);
          records.push_back(record);
          continue;
        }
        record.n = graph->n;
        try {
          const cluster::ClusterReport report = cluster::solve(*graph, config.params, kind, seed);
          record.objective = report.modularity;
          record.iterations = report.sweeps;
          record.augmentations = report.augmentations;
          record.constraint_count = report.clique_factors;
          record.wall_ms = report.wall_ms;
          records.push_back(record);
        } catch (const std::exception& error) {
          records.push_back(failed_record(record, error));
        }
      }
    }
  }
  return records;
}

TspBenchConfig parse_tsp_bench_config(std::string_view json_text) {
  const json doc = parse_json(json_text);
  TspBenchConfig config;
  try {
    for (const auto& name : read_list<std::string>(doc, "families", {})) {
      const auto family = io::parse_family(name);
      if (!family) throw Error("unknown family '" + name + "'");
      config.families.push_back(*family);
    }
    config.sizes = read_list<std::size_t>(doc, "sizes", {});
    config.seeds = read_list<std::uint64_t>(doc, "seeds", {1});
    config.tsplib_files = read_list<std::string>(doc, "tsplib", {});
    if (doc.contains("methods")) {
      config.methods.clear();
      for (const auto& name : read_list<std::string>(doc, "methods", {})) {
        const auto method = parse_tsp_method(name);
        if (!method) throw Error("unknown method '" + name + "'");
        config.methods.push_back(*method);
      }
    }
    config.held_karp_cap = doc.value("held_karp_cap", config.held_karp_cap);
    if (doc.contains("params")) {
      const json& p = doc.at("params");
      auto& params = config.params;
      params.t_max = p.value("tmax", params.t_max);
      params.lambda = p.value("damping", params.lambda);
      params.decimation_fraction = p.value("decimation_frac", params.decimation_fraction);
      params.eps_scale = p.value("eps_scale", params.eps_scale);
      params.max_augmentations = p.value("max_aug", params.max_augmentations);
      params.repair = p.value("repair", params.repair);
      if (p.value("literal_guard", false)) params.stop_rule = tsp::StopRule::LiteralGuard;
    }
  } catch (const json::exception& error) {
    throw Error(std::string("invalid bench config: ") + error.what());
  }
  try {
    config.params.validate();
  } catch (const std::invalid_argument& error) {
    throw Error(std::string("invalid bench config: ") + error.what());
  }
  return config;
}

ClusterBenchConfig parse_cluster_bench_config(std::string_view json_text, const std::string& base_dir) {
  const json doc = parse_json(json_text);
  ClusterBenchConfig config;
  try {
    for (const auto& path : read_list<std::string>(doc, "graphs", {})) {
      std::filesystem::path p(path);
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      config.graphs.push_back(p.string());
    }
    if (doc.contains("nulls")) {
      config.nulls.clear();
      for (const auto& name : read_list<std::string>(doc, "nulls", {})) {
        if (name == "full") {
          config.nulls.push_back(cluster::NullKind::Full);
        } else if (name == "sparse") {
          config.nulls.push_back(cluster::NullKind::Sparse);
        } else {
          throw Error("unknown null model '" + name + "'");
        }
      }
    }
    config.seeds = read_list<std::uint64_t>(doc, "seeds", config.seeds);
    if (doc.contains("params")) {
      const json& p = doc.at("params");
      auto& params = config.params;
      params.t_max = p.value("tmax", params.t_max);
      params.lambda = p.value("damping", params.lambda);
      params.alpha = p.value("alpha", params.alpha);
      params.eps_scale = p.value("eps_scale", params.eps_scale);
      params.max_augmentations = p.value("max_aug", params.max_augmentations);
      params.literal_guard = p.value("literal_guard", params.literal_guard);
    }
  } catch (const json::exception& error) {
    throw Error(std::string("invalid bench config: ") + error.what());
  }
  try {
    config.params.validate();
  } catch (const std::invalid_argument& error) {
    throw Error(std::string("invalid bench config: ") + error.what());
  }
  return config;
}

}  // namespace augbp::cli
