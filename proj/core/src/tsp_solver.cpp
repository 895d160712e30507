#include "augbp/tsp_solver.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "augbp/baselines.hpp"
#include "augbp/error.hpp"
#include "augbp/union_find.hpp"

namespace augbp::tsp {

void TspParams::validate() const {
  if (t_max < 1) throw std::invalid_argument("t_max must be at least 1");
  mp::DampingFactor{lambda};
  if (!(decimation_fraction > 0.0 && decimation_fraction <= 1.0)) {
    throw std::invalid_argument("decimation fraction must lie in (0, 1]");
  }
  if (!(eps_scale > 0.0)) throw std::invalid_argument("eps scale must be positive");
  if (max_augmentations < 0) throw std::invalid_argument("max_augmentations must be non-negative");
}

std::size_t ConstraintFactor::slot_of(EdgeId e) const {
  const auto it = std::lower_bound(edges.begin(), edges.end(), e);
  if (it == edges.end() || *it != e) throw std::out_of_range("edge is not adjacent to this factor");
  return static_cast<std::size_t>(it - edges.begin());
}

double TspState::incoming(const ConstraintFactor& factor, std::size_t slot) const noexcept {
  const EdgeId e = factor.edges[slot];
  switch (clamp[e]) {
    case Clamp::One:
      return -clamp_magnitude;
    case Clamp::Zero:
      return clamp_magnitude;
    case Clamp::Free:
      break;
  }
  return bias[e] - factor.messages[slot];
}

TspState build_initial_graph(const TspInstance& instance) {
  const std::size_t n = instance.num_nodes();
  if (n < 3) throw InvalidInstance("a TSP instance needs at least 3 cities");
  TspState state;
  state.instance = &instance;
  state.bias.assign(instance.distances().begin(), instance.distances().end());
  state.clamp.assign(instance.num_edges(), Clamp::Free);
  state.clamp_magnitude = 1e6 * std::max(instance.max_distance(), 1.0);
  state.factors.reserve(2 * n);
  for (NodeId v = 0; v < n; ++v) {
    ConstraintFactor f;
    f.kind = FactorKind::Degree;
    f.anchor = v;
    f.edges = instance.incident_edges(v);
    f.messages.assign(f.edges.size(), 0.0);
    state.factors.push_back(std::move(f));
  }
  return state;
}

void refresh_incoming(ConstraintFactor& factor, const TspState& state) {
  factor.incoming.clear();
  const std::size_t size = factor.edges.size();
  const bool subtour = factor.kind == FactorKind::Subtour;
  for (std::size_t slot = 0; slot < size; ++slot) {
    factor.incoming.insert(state.incoming(factor, slot), factor.edges[slot]);
    // Three non-positive inputs already force every subtour message to zero.
    if (subtour && factor.incoming.size() == 3 && factor.incoming.entries()[2].value <= 0.0) break;
  }
}

mp::NormalizedMessage degree_message(const mp::Top3Tracker& incoming, EdgeId edge) {
  return -mp::min2_excluding(incoming, edge);
}

mp::NormalizedMessage subtour_message(const mp::Top3Tracker& incoming, EdgeId edge) {
  const auto entries = incoming.entries();
  // Two non-positive inputs besides `edge` mean the constraint is already met.
  std::size_t non_positive = 0;
  for (const auto& entry : entries) {
    if (entry.source != edge && entry.value <= 0.0 && ++non_positive == 2) return 0.0;
  }
  const double second = mp::min2_excluding(incoming, edge);
  return second > 0.0 ? -second : 0.0;
}

namespace {

struct SweepContext {
  TspState& state;
  double lambda;
  /// Number of zero-clamped edges; clamps only accumulate, so it
  /// identifies the clamp pattern.
  std::size_t zeros = 0;
  double change = 0.0;

  /// Rebuilds the live slots if clamps changed. False when every slot has
  /// to be visited instead.
  bool use_live(ConstraintFactor& factor) const {
    if (zeros == 0) return false;
    if (factor.live_key != zeros) {
      factor.live.clear();
      for (std::size_t slot = 0; slot < factor.edges.size(); ++slot) {
        if (state.clamp[factor.edges[slot]] != Clamp::Zero) factor.live.push_back(static_cast<std::uint32_t>(slot));
      }
      factor.live_key = zeros;
    }
    return factor.live.size() >= 3;
  }

  /// Calls `visit(slot)` for every slot that may matter.
  template <typename Visit>
  void for_each_slot(ConstraintFactor& factor, Visit visit) const {
    if (use_live(factor)) {
      for (const std::uint32_t slot : factor.live) {
        if (!visit(slot)) return;
      }
    } else {
      for (std::size_t slot = 0; slot < factor.edges.size(); ++slot) {
        if (!visit(slot)) return;
      }
    }
  }

  void refresh(ConstraintFactor& factor) const {
    factor.incoming.clear();
    const bool subtour = factor.kind == FactorKind::Subtour;
    for_each_slot(factor, [&](std::size_t slot) {
      factor.incoming.insert(state.incoming(factor, slot), factor.edges[slot]);
      // Three non-positive inputs already force every subtour message to zero.
      return !(subtour && factor.incoming.size() == 3 && factor.incoming.entries()[2].value <= 0.0);
    });
  }

  void update(ConstraintFactor& factor, std::size_t slot, double fresh) {
    const EdgeId e = factor.edges[slot];
    if (state.clamp[e] != Clamp::Free) return;
    const double delta = fresh - factor.messages[slot];
    if (delta == 0.0) return;
    factor.messages[slot] += lambda * delta;
    state.bias[e] += lambda * delta;
    change = std::max(change, std::abs(delta));
  }
};

bool saturated(const ConstraintFactor& factor, const TspState& state) {
  const auto entries = factor.incoming.entries();
  return entries.size() >= 2 && state.clamp[entries[0].source] == Clamp::One &&
         state.clamp[entries[1].source] == Clamp::One;
}

void sweep_degree(ConstraintFactor& factor, SweepContext& ctx) {
  bool any_free = false;
  ctx.for_each_slot(factor, [&](std::size_t slot) {
    const EdgeId e = factor.edges[slot];
    if (ctx.state.clamp[e] == Clamp::Free) {
      any_free = true;
      ctx.update(factor, slot, degree_message(factor.incoming, e));
    }
    return true;
  });
  // Messages to clamped edges are frozen, so a fully clamped node is done.
  if (!any_free) factor.inert = true;
}

// Every edge outside the tracker receives the same message, and when that
// message is zero only the tracked slots and the slots still holding a
// non-zero message can change.
void sweep_subtour(ConstraintFactor& factor, SweepContext& ctx) {
  const auto entries = factor.incoming.entries();
  const double second = entries[1].value;
  const double shared = second > 0.0 ? -second : 0.0;
  auto fresh_for = [&](std::size_t slot) {
    const EdgeId e = factor.edges[slot];
    for (const auto& entry : entries) {
      if (entry.source == e) return subtour_message(factor.incoming, e);
    }
    return shared;
  };

  if (shared != 0.0) {
    // Zero-clamped slots are skipped; their messages are frozen, so leaving
    // them out of the non-zero list is harmless.
    factor.nonzero.clear();
    ctx.for_each_slot(factor, [&](std::size_t slot) {
      ctx.update(factor, slot, fresh_for(slot));
      if (factor.messages[slot] != 0.0) factor.nonzero.push_back(static_cast<std::uint32_t>(slot));
      return true;
    });
    return;
  }
  std::array<std::uint32_t, 3> tracked{};
  std::size_t num_tracked = 0;
  for (const auto& entry : entries) tracked[num_tracked++] = static_cast<std::uint32_t>(factor.slot_of(entry.source));
  std::sort(tracked.begin(), tracked.begin() + static_cast<std::ptrdiff_t>(num_tracked));

  const std::vector<std::uint32_t> previous = std::move(factor.nonzero);
  factor.nonzero.clear();
  auto visit = [&](std::uint32_t slot) {
    ctx.update(factor, slot, fresh_for(slot));
    if (factor.messages[slot] != 0.0) factor.nonzero.push_back(slot);
  };
  // Both lists are sorted; merge them so the non-zero list stays sorted.
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < previous.size() || j < num_tracked) {
    if (j == num_tracked || (i < previous.size() && previous[i] < tracked[j])) {
      visit(previous[i++]);
    } else {
      if (i < previous.size() && previous[i] == tracked[j]) ++i;
      visit(tracked[j++]);
    }
  }
}

// A saturated factor only has to keep decaying the messages that are still
// non-zero.
void sweep_inert(ConstraintFactor& factor, SweepContext& ctx) {
  std::vector<std::uint32_t> touched = std::move(factor.nonzero);
  factor.nonzero.clear();
  for (const std::uint32_t slot : touched) {
    ctx.update(factor, slot, 0.0);
    if (factor.messages[slot] != 0.0) factor.nonzero.push_back(slot);
  }
}

}  // namespace

double bp_iteration(TspState& state, const TspParams& params) {
  SweepContext ctx{state, mp::DampingFactor{params.lambda}.value()};
  ctx.zeros = static_cast<std::size_t>(std::count(state.clamp.begin(), state.clamp.end(), Clamp::Zero));
  for (auto& factor : state.factors) {
    if (factor.edges.size() >= 3 && !factor.inert) ctx.refresh(factor);
  }
  for (auto& factor : state.factors) {
    if (factor.edges.size() < 3) continue;
    if (factor.kind == FactorKind::Degree) {
      if (!factor.inert) sweep_degree(factor, ctx);
    } else if (factor.inert) {
      sweep_inert(factor, ctx);
    } else {
      sweep_subtour(factor, ctx);
      // Clamps only accumulate, so two one-clamped cut edges keep every
      // message to a free edge at zero from here on.
      if (saturated(factor, state)) factor.inert = true;
    }
  }
  return ctx.change;
}

BpRound run_bp(TspState& state, const TspParams& params, double eps_max) {
  BpRound round;
  const double eps_conv = 1e-4 * eps_max;
  while (round.iterations < static_cast<std::size_t>(params.t_max)) {
    round.last_change = bp_iteration(state, params);
    ++round.iterations;
    if (params.stop_rule == StopRule::Convergence) {
      if (round.last_change < eps_conv) break;
    } else if (!(round.last_change < eps_max)) {
      break;
    }
  }
  return round;
}

namespace {

std::vector<int> one_degrees(const TspState& state) {
  std::vector<int> degree(state.instance->num_nodes(), 0);
  for (EdgeId e = 0; e < state.clamp.size(); ++e) {
    if (state.clamp[e] != Clamp::One) continue;
    const auto [u, v] = state.instance->endpoints(e);
    ++degree[u];
    ++degree[v];
  }
  return degree;
}

bool by_bias(const TspState& state, EdgeId a, EdgeId b) {
  return state.bias[a] < state.bias[b] || (state.bias[a] == state.bias[b] && a < b);
}

}  // namespace

std::size_t decimate(TspState& state, const TspParams& params) {
  const TspInstance& instance = *state.instance;
  std::vector<int> degree = one_degrees(state);
  const auto quota = static_cast<std::size_t>(
      std::ceil(params.decimation_fraction * static_cast<double>(instance.num_nodes())));

  std::vector<EdgeId> candidates;
  bool any_free = false;
  for (EdgeId e = 0; e < state.clamp.size(); ++e) {
    if (state.clamp[e] != Clamp::Free) continue;
    any_free = true;
    if (state.bias[e] < 0.0) candidates.push_back(e);
  }
  if (!any_free) return 0;
  std::sort(candidates.begin(), candidates.end(),
            [&](EdgeId a, EdgeId b) { return by_bias(state, a, b); });

  auto feasible = [&](EdgeId e) {
    const auto [u, v] = instance.endpoints(e);
    return degree[u] < 2 && degree[v] < 2;
  };
  auto clamp_one = [&](EdgeId e) {
    const auto [u, v] = instance.endpoints(e);
    state.clamp[e] = Clamp::One;
    ++degree[u];
    ++degree[v];
  };

  std::size_t added = 0;
  for (EdgeId e : candidates) {
    if (added >= quota) break;
    if (!feasible(e)) continue;
    clamp_one(e);
    ++added;
  }
  if (added == 0) {
    EdgeId best = static_cast<EdgeId>(state.clamp.size());
    for (EdgeId e = 0; e < state.clamp.size(); ++e) {
      if (state.clamp[e] != Clamp::Free || !feasible(e)) continue;
      if (best == state.clamp.size() || by_bias(state, e, best)) best = e;
    }
    if (best != state.clamp.size()) {
      clamp_one(best);
      added = 1;
    }
  }
  for (EdgeId e = 0; e < state.clamp.size(); ++e) {
    if (state.clamp[e] != Clamp::Free) continue;
    const auto [u, v] = instance.endpoints(e);
    if (degree[u] >= 2 || degree[v] >= 2) state.clamp[e] = Clamp::Zero;
  }
  return added;
}

Selection extract_and_components(const TspState& state) {
  const TspInstance& instance = *state.instance;
  const std::size_t n = instance.num_nodes();
  Selection selection;
  std::vector<int> degree(n, 0);
  std::vector<EdgeId> negative;
  for (EdgeId e = 0; e < state.clamp.size(); ++e) {
    if (state.clamp[e] == Clamp::One) {
      selection.edges.push_back(e);
      const auto [u, v] = instance.endpoints(e);
      ++degree[u];
      ++degree[v];
    } else if (state.clamp[e] == Clamp::Free && state.bias[e] < 0.0) {
      negative.push_back(e);
    }
  }
  std::sort(negative.begin(), negative.end(),
            [&](EdgeId a, EdgeId b) { return by_bias(state, a, b); });
  for (EdgeId e : negative) {
    const auto [u, v] = instance.endpoints(e);
    if (degree[u] >= 2 || degree[v] >= 2) continue;
    selection.edges.push_back(e);
    ++degree[u];
    ++degree[v];
  }
  std::sort(selection.edges.begin(), selection.edges.end());

  DisjointSets sets(n);
  for (EdgeId e : selection.edges) {
    const auto [u, v] = instance.endpoints(e);
    sets.unite(u, v);
  }
  selection.components = sets.groups();
  return selection;
}

std::size_t augment(TspState& state, std::span<const std::vector<NodeId>> components) {
  if (components.size() < 2) {
    throw std::invalid_argument("augment needs at least two components; a single component is a tour");
  }
  const TspInstance& instance = *state.instance;
  const std::size_t n = instance.num_nodes();
  std::size_t added = 0;
  std::vector<char> inside(n);
  for (const auto& component : components) {
    std::fill(inside.begin(), inside.end(), 0);
    for (NodeId v : component) inside[v] = 1;

    // The cut of S equals the cut of its complement; key on the side without node 0.
    std::vector<NodeId> key;
    const bool has_zero = inside[0] != 0;
    for (NodeId v = 0; v < n; ++v) {
      if ((inside[v] != 0) != has_zero) key.push_back(v);
    }
    if (key.empty()) throw std::invalid_argument("component covers every node");
    if (!state.subtour_keys.insert(key).second) continue;

    ConstraintFactor f;
    f.kind = FactorKind::Subtour;
    f.anchor = static_cast<std::uint32_t>(component.size());
    for (EdgeId e = 0; e < instance.num_edges(); ++e) {
      const auto [u, v] = instance.endpoints(e);
      if (inside[u] != inside[v]) f.edges.push_back(e);
    }
    f.messages.assign(f.edges.size(), 0.0);
    state.factors.push_back(std::move(f));
    ++added;
  }
  return added;
}

double belief_residual(const TspState& state) {
  const TspInstance& instance = *state.instance;
  std::vector<double> sum(instance.distances().begin(), instance.distances().end());
  for (const auto& factor : state.factors) {
    for (std::size_t slot = 0; slot < factor.edges.size(); ++slot) {
      sum[factor.edges[slot]] += factor.messages[slot];
    }
  }
  double worst = 0.0;
  for (EdgeId e = 0; e < sum.size(); ++e) {
    if (state.clamp[e] != Clamp::Free) continue;
    worst = std::max(worst, std::abs(state.bias[e] - sum[e]));
  }
  return worst;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Drops the weakest edge of every premature cycle in `selection`, then
// completes greedily, preferring the most negative pre-decimation bias.
Tour repair(const TspState& state, const Selection& selection) {
  const TspInstance& instance = *state.instance;
  const std::size_t n = instance.num_nodes();
  std::vector<int> degree(n, 0);
  for (EdgeId e : selection.edges) {
    const auto [u, v] = instance.endpoints(e);
    ++degree[u];
    ++degree[v];
  }
  std::vector<std::size_t> label(n);
  for (std::size_t c = 0; c < selection.components.size(); ++c) {
    for (NodeId v : selection.components[c]) label[v] = c;
  }
  // A component is a cycle iff all of its nodes have degree two.
  std::vector<char> cyclic(selection.components.size(), 1);
  for (std::size_t v = 0; v < n; ++v) {
    if (degree[v] != 2) cyclic[label[v]] = 0;
  }
  std::vector<EdgeId> weakest(selection.components.size(), static_cast<EdgeId>(instance.num_edges()));
  for (EdgeId e : selection.edges) {
    const std::size_t c = label[instance.endpoints(e).first];
    if (!cyclic[c]) continue;
    EdgeId& w = weakest[c];
    if (w == instance.num_edges() || by_bias(state, w, e)) w = e;
  }
  std::vector<EdgeId> fixed;
  for (EdgeId e : selection.edges) {
    const std::size_t c = label[instance.endpoints(e).first];
    if (cyclic[c] && weakest[c] == e) continue;
    fixed.push_back(e);
  }
  std::vector<EdgeId> preference(instance.num_edges());
  std::iota(preference.begin(), preference.end(), EdgeId{0});
  std::sort(preference.begin(), preference.end(),
            [&](EdgeId a, EdgeId b) { return by_bias(state, a, b); });
  return complete_tour(instance, fixed, preference);
}

}  // namespace

TspReport solve(const TspInstance& instance, const TspParams& params) {
  params.validate();
  const auto start = Clock::now();
  TspReport report;
  const std::size_t n = instance.num_nodes();

  if (n == 3) {
    const NodeId order[] = {0, 1, 2};
    report.tour = make_tour(instance, order);
    report.ok = true;
    report.wall_ms = elapsed_ms(start);
    return report;
  }

  const double eps_max =
      (params.eps_max > 0.0 ? params.eps_max : instance.median_distance()) * params.eps_scale;
  TspState state = build_initial_graph(instance);

  for (std::size_t round = 0;; ++round) {
    report.bp_iterations += run_bp(state, params, eps_max).iterations;

    // Decimate a copy so the next augmentation round restarts from the
    // unclamped messages of this one.
    TspState scratch = state;
    while (std::any_of(scratch.clamp.begin(), scratch.clamp.end(),
                       [](Clamp c) { return c == Clamp::Free; })) {
      decimate(scratch, params);
      ++report.decimation_steps;
      report.bp_iterations += run_bp(scratch, params, eps_max).iterations;
    }
    const Selection selection = extract_and_components(scratch);

    const bool is_tour = selection.components.size() == 1 && is_valid_tour(instance, selection.edges);
    if (is_tour) {
      report.tour.edges = selection.edges;
      report.tour.length = tour_length(instance, report.tour);
      report.ok = true;
      break;
    }

    std::size_t added = 0;
    const bool out_of_rounds = round >= static_cast<std::size_t>(params.max_augmentations);
    if (selection.components.size() > 1 && !out_of_rounds) {
      added = augment(state, selection.components);
      if (added > 0) ++report.augmentations;
    }
    if (added > 0) continue;

    // Hamiltonian path, stalled augmentation (every cut already present) or
    // out of rounds: nothing more the message passing can do.
    if (!params.repair) {
      report.failure = out_of_rounds ? "augmentation limit reached"
                                     : "message passing stalled without a tour";
      break;
    }
    report.tour = repair(state, selection);
    report.repaired = true;
    report.ok = true;
    break;
  }

  report.subtour_factors = state.num_subtour_factors();
  report.wall_ms = elapsed_ms(start);
  return report;
}

}  // namespace augbp::tsp
