#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "augbp/messages.hpp"
#include "augbp/tsp_instance.hpp"

namespace augbp::tsp {

enum class Clamp : std::uint8_t { Free, One, Zero };

/// How a BP round decides to stop.
enum class StopRule : std::uint8_t {
  /// Stop once the largest message change drops below 1e-4 * eps_max, or at t_max.
  Convergence,
  /// Keep iterating while the largest change stays below eps_max, up to t_max.
  LiteralGuard,
};

struct TspParams {
  int t_max = 200;
  double lambda = 0.2;
  /// Non-positive means "median edge distance".
  double eps_max = 0.0;
  double eps_scale = 1.0;
  double decimation_fraction = 0.1;
  int max_augmentations = 1000;
  bool repair = true;
  StopRule stop_rule = StopRule::Convergence;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

enum class FactorKind : std::uint8_t { Degree, Subtour };

/// Degree constraint I(sum x = 2) around a node, or subtour constraint
/// I(sum x >= 2) over the cut of a node subset.
struct ConstraintFactor {
  FactorKind kind = FactorKind::Degree;
  /// Node id for degree factors, |S| for subtour factors.
  std::uint32_t anchor = 0;
  /// Ascending edge ids.
  std::vector<EdgeId> edges;
  /// Factor-to-variable messages, one per edge.
  std::vector<double> messages;
  /// Three smallest variable-to-factor messages of the last sweep.
  mp::Top3Tracker incoming;
  /// Slots whose message is non-zero (subtour factors only).
  std::vector<std::uint32_t> nonzero;
  /// Subtour: two cut edges are clamped to one, so every fresh message to a
  /// free edge is zero and only the decaying non-zero slots need updates.
  /// Degree: every edge is clamped and no message can change.
  bool inert = false;
  /// Slots not clamped to zero, valid while the state's zero-clamp count
  /// equals `live_key`. Zero-clamped inputs never reach the top three when
  /// at least three live slots remain, and their messages are frozen.
  std::vector<std::uint32_t> live;
  std::size_t live_key = 0;

  std::size_t slot_of(EdgeId e) const;
};

/// Binary-edge factor graph plus all message state.
///
/// Variable-to-factor messages are not stored; they are reconstructed as
/// bias[e] - messages[slot]. Degree factors occupy factors[0, n), subtour
/// factors follow in creation order.
struct TspState {
  const TspInstance* instance = nullptr;
  std::vector<double> bias;
  std::vector<Clamp> clamp;
  std::vector<ConstraintFactor> factors;
  /// Canonical subsets (the side without node 0) of every subtour factor.
  std::set<std::vector<NodeId>> subtour_keys;
  /// Magnitude of the message a clamped edge sends to its factors.
  double clamp_magnitude = 0.0;

  std::size_t num_degree_factors() const noexcept { return instance->num_nodes(); }
  std::size_t num_subtour_factors() const noexcept {
    return factors.size() - num_degree_factors();
  }
  /// Variable-to-factor message of `slot` into `factor`.
  double incoming(const ConstraintFactor& factor, std::size_t slot) const noexcept;
};

/// Degree factors for every node, no subtour factors, zero messages, bias = d.
/// Throws InvalidInstance when n < 3.
TspState build_initial_graph(const TspInstance& instance);

/// Rebuilds `factor.incoming` from the current state.
void refresh_incoming(ConstraintFactor& factor, const TspState& state);

/// Closed-form message of I(sum x = 2): -min[2] of the other incoming messages.
mp::NormalizedMessage degree_message(const mp::Top3Tracker& incoming, EdgeId edge);

/// Closed-form message of I(sum x >= 2): -max{0, min[2] of the others}.
mp::NormalizedMessage subtour_message(const mp::Top3Tracker& incoming, EdgeId edge);

/// One synchronous sweep over all factors. Returns the largest |fresh - old|.
double bp_iteration(TspState& state, const TspParams& params);

struct BpRound {
  std::size_t iterations = 0;
  double last_change = 0.0;
};

/// Iterates bp_iteration until the stop rule fires. `eps_max` is the
/// already-scaled threshold.
BpRound run_bp(TspState& state, const TspParams& params, double eps_max);

/// Clamps the most negatively biased free edges to one, then clamps to zero
/// every free edge touching a saturated node. Returns the number of edges
/// clamped to one.
std::size_t decimate(TspState& state, const TspParams& params);

struct Selection {
  std::vector<EdgeId> edges;
  std::vector<std::vector<NodeId>> components;
};

/// One-clamped edges plus negatively biased free edges (strongest first,
/// skipping any that would give a node a third edge), and the connected
/// components of the resulting subgraph.
Selection extract_and_components(const TspState& state);

/// Adds one subtour factor per component, skipping cuts already present.
/// Throws std::invalid_argument with fewer than two components.
std::size_t augment(TspState& state, std::span<const std::vector<NodeId>> components);

/// Largest |bias - d - sum of factor messages| over free edges.
double belief_residual(const TspState& state);

struct TspReport {
  bool ok = false;
  Tour tour;
  std::size_t augmentations = 0;
  std::size_t subtour_factors = 0;
  std::size_t bp_iterations = 0;
  std::size_t decimation_steps = 0;
  bool repaired = false;
  double wall_ms = 0.0;
  std::string failure;
};

/// Augmentative message passing: BP, decimation to completion, component
/// extraction and subtour augmentation until a single tour remains.
TspReport solve(const TspInstance& instance, const TspParams& params = {});

}  // namespace augbp::tsp
