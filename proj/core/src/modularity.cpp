#include "augbp/modularity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

#include "augbp/error.hpp"
#include "augbp/rng.hpp"
#include "augbp/union_find.hpp"

namespace augbp::cluster {

namespace {

std::uint64_t pair_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::uint64_t triangle_key(NodeId a, NodeId b, NodeId c) {
  NodeId t[3] = {a, b, c};
  std::sort(t, t + 3);
  return (static_cast<std::uint64_t>(t[0]) << 42) | (static_cast<std::uint64_t>(t[1]) << 21) | t[2];
}

}  // namespace

void WeightedGraph::validate() const {
  std::unordered_set<std::uint64_t> seen;
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw InvalidInstance("edge endpoint out of range");
    if (e.u == e.v) throw InvalidInstance("self-loop on node " + std::to_string(e.u));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw InvalidInstance("edge weights must be finite and positive");
    }
    if (!seen.insert(pair_key(e.u, e.v)).second) {
      throw InvalidInstance("duplicate edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
    }
  }
}

NormalizedWeights normalize_weights(const WeightedGraph& graph) {
  if (graph.edges.empty()) throw DegenerateInput("cannot normalize a graph without edges");
  graph.validate();
  NormalizedWeights out;
  out.n = graph.n;
  out.degree.assign(graph.n, 0.0);
  for (const auto& e : graph.edges) out.total_weight += e.weight;
  const double scale = 1.0 / (2.0 * out.total_weight);
  out.omega.reserve(graph.edges.size());
  for (const auto& e : graph.edges) {
    const double w = e.weight * scale;
    out.omega.push_back({std::min(e.u, e.v), std::max(e.u, e.v), w});
    out.degree[e.u] += w;
    out.degree[e.v] += w;
  }
  return out;
}

NullModel sample_sparse_null(const NormalizedWeights& weights, double alpha, std::uint64_t seed) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  NullModel model;
  model.kind = NullKind::Sparse;
  model.alpha = alpha;
  model.draws = static_cast<std::size_t>(std::llround(alpha * static_cast<double>(weights.omega.size())));
  if (model.draws == 0) model.draws = 1;

  std::vector<double> root(weights.n);
  double root_sum = 0.0;
  for (std::size_t i = 0; i < weights.n; ++i) {
    root[i] = std::sqrt(weights.degree[i]);
    root_sum += root[i];
  }
  // Each draw adds c * sqrt(d_i d_j); with c = S^2 / (2K) the expected
  // weight of pair {i, j} is d_i d_j and the expected diagonal mass is sum d_i^2.
  const double unit = root_sum * root_sum / (2.0 * static_cast<double>(model.draws));

  Rng rng(seed);
  const DiscreteSampler sampler(root);
  std::map<std::uint64_t, double> accumulated;
  for (std::size_t draw = 0; draw < model.draws; ++draw) {
    const auto a = static_cast<NodeId>(sampler(rng));
    const auto b = static_cast<NodeId>(sampler(rng));
    const double w = unit * root[a] * root[b];
    if (a == b) {
      model.diagonal_mass += 2.0 * w;
    } else {
      accumulated[pair_key(a, b)] += w;
    }
  }
  model.edges.reserve(accumulated.size());
  for (const auto& [key, w] : accumulated) {
    model.edges.push_back({static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu), w});
  }
  return model;
}

NullModel full_null(const NormalizedWeights& weights, std::size_t dense_cap) {
  if (weights.n > dense_cap) {
    throw SizeError("full null model is capped at " + std::to_string(dense_cap) + " nodes (graph has " +
                    std::to_string(weights.n) + "); use the sparse null model");
  }
  NullModel model;
  model.kind = NullKind::Full;
  for (NodeId i = 0; i < weights.n; ++i) {
    model.diagonal_mass += weights.degree[i] * weights.degree[i];
    for (NodeId j = i + 1; j < weights.n; ++j) {
      const double w = weights.degree[i] * weights.degree[j];
      if (w > 0.0) model.edges.push_back({i, j, w});
    }
  }
  return model;
}

mp::NormalizedMessage clique_message(mp::NormalizedMessage a, mp::NormalizedMessage b) noexcept {
  return std::min(0.0, a + b) - std::min({0.0, a, b});
}

std::optional<VarId> ClusterState::find(NodeId a, NodeId b) const {
  const auto it = index_.find(pair_key(a, b));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool ClusterState::has_triangle(NodeId a, NodeId b, NodeId c) const {
  return triangles_.count(triangle_key(a, b, c)) != 0;
}

bool ClusterState::add_triangle(NodeId a, NodeId b, NodeId c) {
  const auto ab = find(a, b);
  const auto bc = find(b, c);
  const auto ac = find(a, c);
  if (!ab || !bc || !ac) return false;
  if (!triangles_.insert(triangle_key(a, b, c)).second) return false;
  const auto index = static_cast<std::uint32_t>(factors.size());
  CliqueFactor f;
  f.vars = {*ab, *bc, *ac};
  factors.push_back(f);
  for (std::uint8_t pos = 0; pos < 3; ++pos) incidence[f.vars[pos]].emplace_back(index, pos);
  return true;
}

void ClusterState::reset_messages() {
  for (auto& f : factors) {
    f.to_variable = {};
    f.to_factor = {};
  }
}

ClusterState build_cluster_state(const NormalizedWeights& weights, const NullModel& null_model) {
  std::map<std::uint64_t, std::pair<double, double>> pairs;
  for (const auto& e : weights.omega) pairs[pair_key(e.u, e.v)].first += e.weight;
  for (const auto& e : null_model.edges) pairs[pair_key(e.u, e.v)].second += e.weight;

  ClusterState state;
  state.n = weights.n;
  state.variables.reserve(pairs.size());
  state.adjacency.assign(weights.n, {});
  for (const auto& [key, w] : pairs) {
    const auto u = static_cast<NodeId>(key >> 32);
    const auto v = static_cast<NodeId>(key & 0xffffffffu);
    const auto id = static_cast<VarId>(state.variables.size());
    state.variables.push_back({u, v, -(w.first - w.second)});
    state.index_.emplace(key, id);
    state.adjacency[u].emplace_back(v, id);
    state.adjacency[v].emplace_back(u, id);
  }
  for (auto& list : state.adjacency) std::sort(list.begin(), list.end());
  state.incidence.assign(state.variables.size(), {});
  return state;
}

void ClusterParams::validate() const {
  mp::DampingFactor{lambda};
  if (t_max < 1) throw std::invalid_argument("t_max must be at least 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(eps_scale > 0.0)) throw std::invalid_argument("eps scale must be positive");
  if (max_augmentations < 0) throw std::invalid_argument("max_augmentations must be non-negative");
}

double bp_sweep(ClusterState& state, const ClusterParams& params) {
  const mp::DampingFactor lambda{params.lambda};
  double change = 0.0;
  for (VarId id = 0; id < state.variables.size(); ++id) {
    PairVariable& var = state.variables[id];
    const double old = var.bias;
    double belief = var.field;
    for (const auto& [fi, pos] : state.incidence[id]) {
      CliqueFactor& f = state.factors[fi];
      const double m = clique_message(f.to_factor[(pos + 1) % 3], f.to_factor[(pos + 2) % 3]);
      f.to_variable[pos] = m;
      belief += m;
    }
    change = std::max(change, std::abs(belief - old));
    var.bias = belief;
    for (const auto& [fi, pos] : state.incidence[id]) {
      CliqueFactor& f = state.factors[fi];
      f.to_factor[pos] = mp::damp(f.to_factor[pos], belief - f.to_variable[pos], lambda);
    }
  }
  return change;
}

std::vector<Triangle> find_violated_triangles(const ClusterState& state) {
  std::vector<Triangle> out;
  std::vector<NodeId> included;
  for (NodeId v = 0; v < state.n; ++v) {
    included.clear();
    for (const auto& [nbr, var] : state.adjacency[v]) {
      if (state.variables[var].included()) included.push_back(nbr);
    }
    for (std::size_t a = 0; a < included.size(); ++a) {
      for (std::size_t b = a + 1; b < included.size(); ++b) {
        const auto closing = state.find(included[a], included[b]);
        if (!closing || state.variables[*closing].included()) continue;
        if (state.has_triangle(v, included[a], included[b])) continue;
        NodeId t[3] = {v, included[a], included[b]};
        std::sort(t, t + 3);
        out.push_back({t[0], t[1], t[2]});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Triangle& x, const Triangle& y) {
    return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Clustering Clustering::from_labels(std::span<const std::uint32_t> labels) {
  Clustering c;
  c.assignment.reserve(labels.size());
  std::map<std::uint32_t, std::uint32_t> relabel;
  for (auto label : labels) {
    const auto [it, fresh] = relabel.emplace(label, static_cast<std::uint32_t>(relabel.size()));
    c.assignment.push_back(it->second);
  }
  c.k = relabel.size();
  return c;
}

Clustering extract_clustering(const ClusterState& state) {
  DisjointSets sets(state.n);
  for (const auto& var : state.variables) {
    if (var.included()) sets.unite(var.u, var.v);
  }
  std::vector<std::uint32_t> labels(state.n);
  for (std::size_t v = 0; v < state.n; ++v) labels[v] = static_cast<std::uint32_t>(sets.find(v));
  return Clustering::from_labels(labels);
}

double modularity_score(const NormalizedWeights& weights, const Clustering& clustering) {
  if (clustering.assignment.size() != weights.n) {
    throw std::invalid_argument("clustering must label every node");
  }
  double within = 0.0;
  for (const auto& e : weights.omega) {
    if (clustering.assignment[e.u] == clustering.assignment[e.v]) within += 2.0 * e.weight;
  }
  std::vector<double> cluster_degree(clustering.k, 0.0);
  for (std::size_t v = 0; v < weights.n; ++v) cluster_degree[clustering.assignment[v]] += weights.degree[v];
  double expected = 0.0;
  for (double d : cluster_degree) expected += d * d;
  return within - expected;
}

std::uint64_t count_triangles(const ClusterState& state) {
  std::uint64_t count = 0;
  for (const auto& var : state.variables) {
    const auto& a = state.adjacency[var.u];
    const auto& b = state.adjacency[var.v];
    auto ia = std::upper_bound(a.begin(), a.end(), std::make_pair(var.v, ~VarId{0}));
    auto ib = std::upper_bound(b.begin(), b.end(), std::make_pair(var.v, ~VarId{0}));
    while (ia != a.end() && ib != b.end()) {
      if (ia->first < ib->first) {
        ++ia;
      } else if (ib->first < ia->first) {
        ++ib;
      } else {
        ++count;
        ++ia;
        ++ib;
      }
    }
  }
  return count;
}

ClusterReport solve(const WeightedGraph& graph, const ClusterParams& params, NullKind kind,
                    std::uint64_t seed) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  const NormalizedWeights weights = normalize_weights(graph);
  const NullModel null_model =
      kind == NullKind::Full ? full_null(weights, params.dense_cap) : sample_sparse_null(weights, params.alpha, seed);
  ClusterState state = build_cluster_state(weights, null_model);

  double eps_max = params.eps_max;
  if (!(eps_max > 0.0)) {
    std::vector<double> magnitudes;
    magnitudes.reserve(state.variables.size());
    for (const auto& var : state.variables) magnitudes.push_back(std::abs(var.field));
    const auto mid = magnitudes.begin() + static_cast<std::ptrdiff_t>((magnitudes.size() - 1) / 2);
    std::nth_element(magnitudes.begin(), mid, magnitudes.end());
    eps_max = *mid;
  }
  eps_max *= params.eps_scale;
  const double eps_conv = 1e-4 * eps_max;

  ClusterReport report;
  for (;;) {
    for (int t = 0; t < params.t_max; ++t) {
      const double change = bp_sweep(state, params);
      ++report.sweeps;
      if (params.literal_guard ? !(change < eps_max) : change < eps_conv) break;
    }
    const auto violated = find_violated_triangles(state);
    if (violated.empty()) break;
    if (report.augmentations >= static_cast<std::size_t>(params.max_augmentations)) {
      report.hit_augmentation_cap = true;
      break;
    }
    for (const auto& t : violated) state.add_triangle(t.a, t.b, t.c);
    ++report.augmentations;
    state.reset_messages();
  }

  report.clustering = extract_clustering(state);
  report.modularity = modularity_score(weights, report.clustering);
  report.num_variables = state.variables.size();
  report.clique_factors = state.factors.size();
  report.possible_cliques = count_triangles(state);
  report.cost = report.possible_cliques > 0
                    ? static_cast<double>(report.clique_factors) / static_cast<double>(report.possible_cliques)
                    : 0.0;
  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace augbp::cluster
