#include "augbp/cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "augbp/baselines.hpp"
#include "augbp/cli/bench.hpp"
#include "augbp/error.hpp"
#include "augbp/instance_io.hpp"
#include "augbp/modularity.hpp"
#include "augbp/tsp_solver.hpp"

namespace augbp::cli {

namespace {

using Clock = std::chrono::steady_clock;

/// Optional overrides shared by `tsp solve` and `tsp bench`.
struct TspFlags {
  std::optional<int> t_max;
  std::optional<double> damping;
  std::optional<double> decimation_frac;
  std::optional<double> eps_scale;
  std::optional<int> max_aug;
  bool literal_guard = false;
  bool no_repair = false;

  void add_to(CLI::App& app) {
    app.add_option("--tmax", t_max, "BP iteration cap per round (default 200)");
    app.add_option("--damping", damping, "damping factor lambda in (0, 1] (default 0.2)");
    app.add_option("--decimation-frac", decimation_frac, "fraction of n clamped per decimation step (default 0.1)");
    app.add_option("--eps-scale", eps_scale, "multiplier on the median-distance threshold (default 1)");
    app.add_option("--max-aug", max_aug, "augmentation round cap (default 1000)");
    app.add_flag("--literal-guard", literal_guard, "run BP while the change stays below the threshold");
    app.add_flag("--no-repair", no_repair, "fail instead of repairing a stalled selection");
  }

  void apply(tsp::TspParams& params) const {
    if (t_max) params.t_max = *t_max;
    if (damping) params.lambda = *damping;
    if (decimation_frac) params.decimation_fraction = *decimation_frac;
    if (eps_scale) params.eps_scale = *eps_scale;
    if (max_aug) params.max_augmentations = *max_aug;
    if (literal_guard) params.stop_rule = tsp::StopRule::LiteralGuard;
    if (no_repair) params.repair = false;
  }
};

struct ClusterFlags {
  std::optional<int> t_max;
  std::optional<double> damping;
  std::optional<double> alpha;
  std::optional<double> eps_scale;
  std::optional<int> max_aug;
  bool literal_guard = false;

  void add_to(CLI::App& app) {
    app.add_option("--tmax", t_max, "sweeps per augmentation round (default 10)");
    app.add_option("--damping", damping, "damping factor lambda in (0, 1] (default 0.1)");
    app.add_option("--alpha", alpha, "sparse null model draws per observed edge (default 20)");
    app.add_option("--eps-scale", eps_scale, "multiplier on the median-field threshold (default 1)");
    app.add_option("--max-aug", max_aug, "augmentation round cap (default 200)");
    app.add_flag("--literal-guard", literal_guard, "sweep while the change stays below the threshold");
  }

  void apply(cluster::ClusterParams& params) const {
    if (t_max) params.t_max = *t_max;
    if (damping) params.lambda = *damping;
    if (alpha) params.alpha = *alpha;
    if (eps_scale) params.eps_scale = *eps_scale;
    if (max_aug) params.max_augmentations = *max_aug;
    if (literal_guard) params.literal_guard = true;
  }
};

std::optional<cluster::NullKind> parse_null(const std::string& name) {
  if (name == "full") return cluster::NullKind::Full;
  if (name == "sparse") return cluster::NullKind::Sparse;
  return std::nullopt;
}

const auto kFamilyCheck = CLI::IsMember({"euclid2d", "random_matrix", "hamming20", "correlation5"});
const auto kMethodCheck = CLI::IsMember({"mp", "nn", "greedy", "held-karp"});
const auto kNullCheck = CLI::IsMember({"full", "sparse"});

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write '" + path + "'");
  file << content;
  if (!file) throw Error("failed writing '" + path + "'");
}

std::string csv_text(std::span<const BenchRecord> records) {
  std::ostringstream os;
  write_csv(os, records);
  return os.str();
}

std::string fmt(double value, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << value;
  return os.str();
}

// ---------------------------------------------------------------- tsp solve

struct TspSolveCommand {
  std::string gen_family;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string file;
  std::string method = "mp";
  std::size_t held_karp_cap = 12;
  std::string out_path;
  bool print_tour = false;
  TspFlags flags;

  void add_to(CLI::App& app) {
    auto* gen = app.add_option("--gen", gen_family, "generate an instance of this family")->check(kFamilyCheck);
    auto* file_opt = app.add_option("--file", file, "read a TSPLIB instance");
    gen->excludes(file_opt);
    app.add_option("--n", n, "number of cities for --gen")->needs(gen);
    app.add_option("--seed", seed, "generator seed (default 1)");
    app.add_option("--method", method, "mp, nn, greedy or held-karp (default mp)")->check(kMethodCheck);
    app.add_option("--hk-cap", held_karp_cap, "compute the optimality ratio up to this n (default 12)");
    app.add_option("--out", out_path, "write a one-row CSV");
    app.add_flag("--tour", print_tour, "print the city order");
    flags.add_to(app);
  }

  int execute(std::ostream& out, std::ostream& err) const {
    if (gen_family.empty() == file.empty()) {
      err << "error: give exactly one of --gen or --file\n";
      return 2;
    }
    if (!gen_family.empty() && n < 3) {
      err << "error: --gen needs --n of at least 3\n";
      return 2;
    }
    tsp::TspParams params;
    flags.apply(params);
    try {
      params.validate();
    } catch (const std::invalid_argument& error) {
      err << "error: " << error.what() << '\n';
      return 2;
    }

    const tsp::TspInstance instance = gen_family.empty()
                                          ? io::parse_tsplib(io::read_file(file))
                                          : io::gen_instance({*io::parse_family(gen_family), n, seed});
    const TspMethod which = *parse_tsp_method(method);

    BenchRecord record;
    record.instance = instance.name();
    record.family = gen_family.empty() ? "tsplib" : gen_family;
    record.n = instance.num_nodes();
    record.method = method;
    record.seed = gen_family.empty() ? 0 : seed;

    tsp::Tour tour;
    bool ok = true;
    std::string failure;
    const auto start = Clock::now();
    switch (which) {
      case TspMethod::MessagePassing: {
        const tsp::TspReport report = tsp::solve(instance, params);
        ok = report.ok;
        failure = report.failure;
        tour = report.tour;
        record.iterations = report.bp_iterations;
        record.augmentations = report.augmentations;
        record.constraint_count = report.subtour_factors;
        record.repaired = report.repaired;
        break;
      }
      case TspMethod::NearestNeighbour:
        tour = tsp::nearest_neighbour_best(instance).tour;
        break;
      case TspMethod::Greedy:
        tour = tsp::greedy_edge(instance).tour;
        break;
      case TspMethod::HeldKarp:
        tour = tsp::held_karp_exact(instance).tour;
        break;
    }
    record.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();

    out << "instance       " << instance.name() << " (n=" << instance.num_nodes() << ")\n";
    out << "method         " << method << '\n';
    if (!ok) {
      record.status = "error: " + failure;
      out << "status         failed: " << failure << '\n';
    } else {
      record.objective = tour.length;
      out << "length         " << fmt(tour.length, 10) << '\n';
      if (instance.num_nodes() <= std::min(held_karp_cap, tsp::kHeldKarpMaxNodes)) {
        const double optimum = tsp::held_karp_exact(instance).tour.length;
        record.optimality_ratio = optimum > 0.0 ? tour.length / optimum : 1.0;
        out << "optimal        " << fmt(optimum, 10) << " (ratio " << fmt(*record.optimality_ratio) << ")\n";
      }
    }
    if (which == TspMethod::MessagePassing) {
      out << "augmentations  " << record.augmentations << '\n';
      out << "subtour factors " << record.constraint_count << '\n';
      out << "bp iterations  " << record.iterations << '\n';
      out << "repaired       " << (record.repaired ? "yes" : "no") << '\n';
    }
    out << "wall ms        " << fmt(record.wall_ms) << '\n';
    if (ok && print_tour) {
      out << "tour          ";
      for (const tsp::NodeId v : tsp::tour_order(instance, tour)) out << ' ' << v;
      out << '\n';
    }
    if (!out_path.empty()) write_file(out_path, csv_text(std::span(&record, 1)));
    return ok ? 0 : 1;
  }
};

// ------------------------------------------------------------------ tsp gen

struct TspGenCommand {
  std::string family;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string out_path;

  void add_to(CLI::App& app) {
    app.add_option("--family", family, "instance family")->required()->check(kFamilyCheck);
    app.add_option("--n", n, "number of cities")->required()->check(CLI::Range(3, 1 << 20));
    app.add_option("--seed", seed, "generator seed (default 1)");
    app.add_option("--out", out_path, "write TSPLIB here instead of standard output");
  }

  int execute(std::ostream& out) const {
    const tsp::TspInstance instance = io::gen_instance({*io::parse_family(family), n, seed});
    const std::string text = io::write_tsplib(instance);
    if (out_path.empty()) {
      out << text;
    } else {
      write_file(out_path, text);
      out << "wrote " << instance.name() << " to " << out_path << '\n';
    }
    return 0;
  }
};

// ---------------------------------------------------------------- tsp bench

void print_records(std::ostream& out, std::span<const BenchRecord> records) {
  for (const auto& r : records) {
    out << std::left << std::setw(28) << r.instance << ' ' << std::setw(10) << r.method << std::right;
    if (r.objective) {
      out << " objective " << fmt(*r.objective, 8);
    } else {
      out << " " << r.status;
    }
    if (r.optimality_ratio) out << " ratio " << fmt(*r.optimality_ratio, 5);
    out << " ms " << fmt(r.wall_ms, 5) << '\n';
  }
}

struct TspBenchCommand {
  std::string config_path;
  std::vector<std::string> families;
  std::vector<std::size_t> sizes;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> methods;
  std::optional<std::size_t> held_karp_cap;
  std::string out_path;
  TspFlags flags;

  void add_to(CLI::App& app) {
    app.add_option("--config", config_path, "JSON suite description");
    app.add_option("--families", families, "comma-separated families")->delimiter(',')->check(kFamilyCheck);
    app.add_option("--sizes", sizes, "comma-separated city counts")->delimiter(',');
    app.add_option("--seeds", seeds, "comma-separated seeds")->delimiter(',');
    app.add_option("--methods", methods, "comma-separated methods")->delimiter(',')->check(kMethodCheck);
    app.add_option("--hk-cap", held_karp_cap, "largest n that gets a Held-Karp optimum (default 16)");
    app.add_option("--out", out_path, "CSV output path");
    flags.add_to(app);
  }

  int execute(std::ostream& out, std::ostream& err) const {
    TspBenchConfig config;
    if (!config_path.empty()) config = parse_tsp_bench_config(io::read_file(config_path));
    if (config_path.empty()) config.seeds = {1};
    for (const auto& name : families) {
      if (&name == &families.front()) config.families.clear();
      config.families.push_back(*io::parse_family(name));
    }
    if (!sizes.empty()) config.sizes = sizes;
    if (!seeds.empty()) config.seeds = seeds;
    if (!methods.empty()) {
      config.methods.clear();
      for (const auto& name : methods) config.methods.push_back(*parse_tsp_method(name));
    }
    if (held_karp_cap) config.held_karp_cap = *held_karp_cap;
    flags.apply(config.params);
    try {
      config.params.validate();
    } catch (const std::invalid_argument& error) {
      err << "error: " << error.what() << '\n';
      return 2;
    }
    if (std::any_of(config.sizes.begin(), config.sizes.end(), [](std::size_t s) { return s < 3; })) {
      err << "error: sizes must be at least 3\n";
      return 2;
    }
    if ((config.families.empty() || config.sizes.empty()) && config.tsplib_files.empty()) {
      err << "error: nothing to run; give families and sizes or a config with tsplib files\n";
      return 2;
    }

    const TspBenchResult result = run_tsp_bench(config);
    print_records(out, result.records);
    for (const auto& [family, slope] : result.slopes) {
      out << "runtime slope " << family << " " << fmt(slope, 4) << '\n';
    }
    if (!out_path.empty()) write_file(out_path, csv_text(result.records));
    return 0;
  }
};

// ------------------------------------------------------------ cluster solve

struct ClusterSolveCommand {
  std::string edges_path;
  std::string null_name = "full";
  std::uint64_t seed = 1;
  std::string out_path;
  bool print_assignment = false;
  ClusterFlags flags;

  void add_to(CLI::App& app) {
    app.add_option("--edges", edges_path, "weighted edge list")->required();
    app.add_option("--null", null_name, "full or sparse (default full)")->check(kNullCheck);
    app.add_option("--seed", seed, "sparse null model seed (default 1)");
    app.add_option("--out", out_path, "write a one-row CSV");
    app.add_flag("--assignment", print_assignment, "print the cluster of every node");
    flags.add_to(app);
  }

  int execute(std::ostream& out, std::ostream& err) const {
    cluster::ClusterParams params;
    flags.apply(params);
    try {
      params.validate();
    } catch (const std::invalid_argument& error) {
      err << "error: " << error.what() << '\n';
      return 2;
    }
    const cluster::WeightedGraph graph = io::parse_edge_list(io::read_file(edges_path));
    const cluster::NullKind kind = *parse_null(null_name);
    const cluster::ClusterReport report = cluster::solve(graph, params, kind, seed);

    out << "graph          " << edges_path << " (n=" << graph.n << ", m=" << graph.edges.size() << ")\n";
    out << "null model     " << null_name << '\n';
    out << "modularity     " << fmt(report.modularity, 10) << '\n';
    out << "clusters       " << report.clustering.k << '\n';
    out << "variables      " << report.num_variables << '\n';
    out << "clique factors " << report.clique_factors << " of " << report.possible_cliques << " (cost "
        << fmt(report.cost, 4) << ")\n";
    out << "augmentations  " << report.augmentations << (report.hit_augmentation_cap ? " (cap reached)" : "")
        << '\n';
    out << "sweeps         " << report.sweeps << '\n';
    out << "wall ms        " << fmt(report.wall_ms) << '\n';
    if (print_assignment) {
      for (std::size_t v = 0; v < graph.n; ++v) {
        const std::string& label = v < graph.labels.size() ? graph.labels[v] : std::to_string(v);
        out << label << ' ' << report.clustering.assignment[v] << '\n';
      }
    }
    if (!out_path.empty()) {
      BenchRecord record;
      record.instance = std::filesystem::path(edges_path).stem().string();
      record.family = "graph";
      record.n = graph.n;
      record.method = kind == cluster::NullKind::Full ? "mp-full" : "mp-sparse";
      record.objective = report.modularity;
      record.iterations = report.sweeps;
      record.augmentations = report.augmentations;
      record.constraint_count = report.clique_factors;
      record.wall_ms = report.wall_ms;
      record.seed = seed;
      write_file(out_path, csv_text(std::span(&record, 1)));
    }
    return 0;
  }
};

// ------------------------------------------------------------ cluster bench

struct ClusterBenchCommand {
  std::string config_path;
  std::vector<std::string> graphs;
  std::vector<std::string> nulls;
  std::vector<std::uint64_t> seeds;
  std::string out_path;
  ClusterFlags flags;

  void add_to(CLI::App& app) {
    app.add_option("--config", config_path, "JSON suite description");
    app.add_option("--edges", graphs, "comma-separated edge list files")->delimiter(',');
    app.add_option("--nulls", nulls, "comma-separated null models")->delimiter(',')->check(kNullCheck);
    app.add_option("--seeds", seeds, "comma-separated seeds")->delimiter(',');
    app.add_option("--out", out_path, "CSV output path");
    flags.add_to(app);
  }

  int execute(std::ostream& out, std::ostream& err) const {
    ClusterBenchConfig config;
    if (!config_path.empty()) {
      config = parse_cluster_bench_config(io::read_file(config_path),
                                          std::filesystem::path(config_path).parent_path().string());
    }
    if (!graphs.empty()) config.graphs = graphs;
    if (!nulls.empty()) {
      config.nulls.clear();
      for (const auto& name : nulls) config.nulls.push_back(*parse_null(name));
    }
    if (!seeds.empty()) config.seeds = seeds;
    flags.apply(config.params);
    try {
      config.params.validate();
    } catch (const std::invalid_argument& error) {
      err << "error: " << error.what() << '\n';
      return 2;
    }
    if (config.graphs.empty()) {
      err << "error: no graphs given\n";
      return 2;
    }
    const auto records = run_cluster_bench(config);
    print_records(out, records);
    if (!out_path.empty()) write_file(out_path, csv_text(records));
    return 0;
  }
};

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Augmentative message passing for TSP and modularity clustering", "augbp"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  auto* tsp_cmd = app.add_subcommand("tsp", "travelling salesman commands");
  tsp_cmd->require_subcommand(1);
  auto* cluster_cmd = app.add_subcommand("cluster", "modularity clustering commands");
  cluster_cmd->require_subcommand(1);

  TspSolveCommand tsp_solve;
  TspGenCommand tsp_gen;
  TspBenchCommand tsp_bench;
  ClusterSolveCommand cluster_solve;
  ClusterBenchCommand cluster_bench;
  auto* tsp_solve_app = tsp_cmd->add_subcommand("solve", "solve one instance");
  tsp_solve.add_to(*tsp_solve_app);
  auto* tsp_gen_app = tsp_cmd->add_subcommand("gen", "generate an instance as TSPLIB");
  tsp_gen.add_to(*tsp_gen_app);
  auto* tsp_bench_app = tsp_cmd->add_subcommand("bench", "run a benchmark suite");
  tsp_bench.add_to(*tsp_bench_app);
  auto* cluster_solve_app = cluster_cmd->add_subcommand("solve", "cluster one graph");
  cluster_solve.add_to(*cluster_solve_app);
  auto* cluster_bench_app = cluster_cmd->add_subcommand("bench", "run a clustering suite");
  cluster_bench.add_to(*cluster_bench_app);

  // CLI11 consumes arguments from the back.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (tsp_solve_app->parsed()) return tsp_solve.execute(out, err);
    if (tsp_gen_app->parsed()) return tsp_gen.execute(out);
    if (tsp_bench_app->parsed()) return tsp_bench.execute(out, err);
    if (cluster_solve_app->parsed()) return cluster_solve.execute(out, err);
    if (cluster_bench_app->parsed()) return cluster_bench.execute(out, err);
  } catch (const std::exception& error) {
    err << "error: " << error.what() << '\n';
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace augbp::cli
