#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "augbp/tsp_instance.hpp"

namespace augbp::tsp {

enum class BaselineMethod { NearestNeighbour, GreedyEdge, HeldKarp };

std::string_view to_string(BaselineMethod method);

struct BaselineResult {
  Tour tour;
  BaselineMethod method;
};

/// Grows a path from `start`, attaching the closest unvisited city to
/// whichever end is nearer (tail wins ties, then lower node id).
BaselineResult nearest_neighbour(const TspInstance& instance, NodeId start = 0);

/// Best nearest-neighbour tour over all start cities.
BaselineResult nearest_neighbour_best(const TspInstance& instance);

/// Shortest-edge-first construction that never closes a cycle shorter than n.
BaselineResult greedy_edge(const TspInstance& instance);

/// Extends a partial selection (paths only, degrees <= 2) to a tour by
/// scanning `preference` in order and accepting every edge that keeps
/// degrees <= 2 and closes no premature cycle. `preference` should list
/// every edge of the instance.
Tour complete_tour(const TspInstance& instance, std::span<const EdgeId> fixed,
                   std::span<const EdgeId> preference);

inline constexpr std::size_t kHeldKarpMaxNodes = 20;

/// Exact bitmask dynamic program. Throws SizeError when n > 20.
BaselineResult held_karp_exact(const TspInstance& instance);

}  // namespace augbp::tsp
