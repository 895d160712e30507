#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "augbp/messages.hpp"

namespace augbp::cluster {

using NodeId = std::uint32_t;
using VarId = std::uint32_t;

struct WeightedEdge {
  NodeId u;
  NodeId v;
  double weight;
};

/// Undirected graph with positive edge weights and no self-loops.
struct WeightedGraph {
  std::size_t n = 0;
  std::vector<WeightedEdge> edges;
  /// Optional original node names, indexed by compacted id.
  std::vector<std::string> labels;

  /// Throws DegenerateInput/InvalidInstance on self-loops, duplicates,
  /// out-of-range ids or non-positive weights.
  void validate() const;
};

/// Weights scaled so the sum over ordered pairs is one.
struct NormalizedWeights {
  std::size_t n = 0;
  /// Same pairs as the graph, weight replaced by omega.
  std::vector<WeightedEdge> omega;
  /// omega(dv_i) = sum_j omega(v_i, v_j); sums to one.
  std::vector<double> degree;
  /// Sum of raw weights over unordered edges.
  double total_weight = 0.0;
};

enum class NullKind { Full, Sparse };

/// Null-model pair weights. Ordered-pair mass plus `diagonal_mass` is one
/// (exactly for the full model, in expectation for the sampled one).
struct NullModel {
  NullKind kind = NullKind::Full;
  std::vector<WeightedEdge> edges;
  double diagonal_mass = 0.0;
  double alpha = 0.0;
  std::size_t draws = 0;
};

/// Throws DegenerateInput when the graph has no edges.
NormalizedWeights normalize_weights(const WeightedGraph& graph);

/// Stochastic sparse null model.
///
/// round(alpha * M) ordered pairs are drawn with P(v) proportional to
/// sqrt(omega(dv)), each adding weight proportional to sqrt(omega(dv_i)
/// omega(dv_j)); repeated pairs accumulate. A draw landing on a self-pair
/// only contributes diagonal mass. The scale is fixed so that the expected
/// weight of every pair is exactly omega(dv_i) omega(dv_j).
NullModel sample_sparse_null(const NormalizedWeights& weights, double alpha, std::uint64_t seed);

inline constexpr std::size_t kDenseNullCap = 300;

/// omega_null(i, j) = omega(dv_i) omega(dv_j) for every pair i < j.
/// Throws SizeError above `dense_cap` nodes.
NullModel full_null(const NormalizedWeights& weights, std::size_t dense_cap = kDenseNullCap);

/// Normalized clique-factor message toward one edge of a triangle given
/// the other two incoming messages: min{0, a + b} - min{0, a, b}.
mp::NormalizedMessage clique_message(mp::NormalizedMessage a, mp::NormalizedMessage b) noexcept;

/// Binary variable for one pair in E u E_null.
struct PairVariable {
  NodeId u;
  NodeId v;
  /// Energy of x = 1: -(omega - omega_null).
  double field;
  /// Normalized belief; negative means "same cluster".
  double bias = 0.0;

  bool included() const noexcept { return bias < 0.0; }
};

/// I(x_ij + x_jk + x_ik != 2) over three pair variables.
struct CliqueFactor {
  std::array<VarId, 3> vars;
  std::array<double, 3> to_variable{};
  std::array<double, 3> to_factor{};
};

struct ClusterState;
ClusterState build_cluster_state(const NormalizedWeights& weights, const NullModel& null_model);

struct ClusterState {
  std::size_t n = 0;
  /// Sorted by (u, v); this is the sweep order.
  std::vector<PairVariable> variables;
  std::vector<CliqueFactor> factors;
  /// Per variable: (factor index, position inside the factor).
  std::vector<std::vector<std::pair<std::uint32_t, std::uint8_t>>> incidence;
  /// Per node: (neighbour, variable) over E u E_null, neighbours ascending.
  std::vector<std::vector<std::pair<NodeId, VarId>>> adjacency;

  std::optional<VarId> find(NodeId a, NodeId b) const;
  bool has_triangle(NodeId a, NodeId b, NodeId c) const;

  /// Returns false if the triangle is already present or lacks an edge.
  bool add_triangle(NodeId a, NodeId b, NodeId c);
  /// Zeroes every stored message.
  void reset_messages();

 private:
  friend ClusterState build_cluster_state(const NormalizedWeights&, const NullModel&);

  std::unordered_map<std::uint64_t, VarId> index_;
  std::unordered_set<std::uint64_t> triangles_;
};

struct ClusterParams {
  double lambda = 0.1;
  int t_max = 10;
  /// Non-positive means median |omega - omega_null| over all variables.
  double eps_max = 0.0;
  double eps_scale = 1.0;
  double alpha = 20.0;
  int max_augmentations = 200;
  std::size_t dense_cap = kDenseNullCap;
  bool literal_guard = false;

  void validate() const;
};

/// One asynchronous pass over the variables in order: recompute the
/// belief from the local field and the current clique messages, then
/// damp the outgoing variable-to-factor messages. Returns max |delta bias|.
double bp_sweep(ClusterState& state, const ClusterParams& params);

struct Triangle {
  NodeId a;
  NodeId b;
  NodeId c;

  friend bool operator==(const Triangle&, const Triangle&) = default;
};

/// Triangles with two included edges at a node whose closing edge exists
/// but is excluded and has no factor yet. Sorted, no duplicates.
std::vector<Triangle> find_violated_triangles(const ClusterState& state);

struct Clustering {
  /// Contiguous labels 0..k-1 in order of first appearance.
  std::vector<std::uint32_t> assignment;
  std::size_t k = 0;

  static Clustering from_labels(std::span<const std::uint32_t> labels);
};

/// Connected components of the included variables.
Clustering extract_clustering(const ClusterState& state);

/// Modularity with the full null model: sum over clusters and ordered
/// member pairs (i = j included) of omega(i, j) - omega(dv_i) omega(dv_j).
double modularity_score(const NormalizedWeights& weights, const Clustering& clustering);

/// Number of triangles in the union graph E u E_null.
std::uint64_t count_triangles(const ClusterState& state);

struct ClusterReport {
  Clustering clustering;
  double modularity = 0.0;
  std::size_t num_variables = 0;
  std::size_t clique_factors = 0;
  std::uint64_t possible_cliques = 0;
  /// clique_factors / possible_cliques.
  double cost = 0.0;
  std::size_t augmentations = 0;
  std::size_t sweeps = 0;
  bool hit_augmentation_cap = false;
  double wall_ms = 0.0;
};

ClusterReport solve(const WeightedGraph& graph, const ClusterParams& params, NullKind kind,
                    std::uint64_t seed);

}  // namespace augbp::cluster
