#include "augbp/baselines.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

#include "augbp/error.hpp"
#include "augbp/union_find.hpp"

namespace augbp::tsp {

std::string_view to_string(BaselineMethod method) {
  switch (method) {
    case BaselineMethod::NearestNeighbour:
      return "nearest-neighbour";
    case BaselineMethod::GreedyEdge:
      return "greedy-edge";
    case BaselineMethod::HeldKarp:
      return "held-karp";
  }
  return "unknown";
}

BaselineResult nearest_neighbour(const TspInstance& instance, NodeId start) {
  const std::size_t n = instance.num_nodes();
  if (start >= n) throw InvalidInstance("start city out of range");
  std::deque<NodeId> path{start};
  std::vector<char> visited(n, 0);
  visited[start] = 1;
  while (path.size() < n) {
    // Tail first, so a tie between the two ends extends the tail.
    NodeId best = 0;
    bool at_tail = true;
    double best_d = std::numeric_limits<double>::infinity();
    for (const bool tail : {true, false}) {
      const NodeId end = tail ? path.back() : path.front();
      for (NodeId v = 0; v < n; ++v) {
        if (visited[v]) continue;
        const double d = instance.distance(end, v);
        if (d < best_d) {
          best_d = d;
          best = v;
          at_tail = tail;
        }
      }
    }
    visited[best] = 1;
    if (at_tail) {
      path.push_back(best);
    } else {
      path.push_front(best);
    }
  }
  const std::vector<NodeId> order(path.begin(), path.end());
  return {make_tour(instance, order), BaselineMethod::NearestNeighbour};
}

BaselineResult nearest_neighbour_best(const TspInstance& instance) {
  BaselineResult best = nearest_neighbour(instance, 0);
  for (NodeId s = 1; s < instance.num_nodes(); ++s) {
    BaselineResult candidate = nearest_neighbour(instance, s);
    if (candidate.tour.length < best.tour.length) best = std::move(candidate);
  }
  return best;
}

Tour complete_tour(const TspInstance& instance, std::span<const EdgeId> fixed,
                   std::span<const EdgeId> preference) {
  const std::size_t n = instance.num_nodes();
  std::vector<int> degree(n, 0);
  DisjointSets sets(n);
  Tour tour;
  auto accept = [&](EdgeId e) {
    const auto [u, v] = instance.endpoints(e);
    if (degree[u] >= 2 || degree[v] >= 2) return false;
    // Joining two path ends of the same fragment closes a cycle; only the
    // final edge may do that.
    if (sets.same(u, v) && tour.edges.size() + 1 != n) return false;
    ++degree[u];
    ++degree[v];
    sets.unite(u, v);
    tour.edges.push_back(e);
    return true;
  };
  for (EdgeId e : fixed) {
    if (!accept(e)) throw InvalidTour("fixed edges already violate the tour constraints");
  }
  for (EdgeId e : preference) {
    if (tour.edges.size() == n) break;
    accept(e);
  }
  std::sort(tour.edges.begin(), tour.edges.end());
  tour.length = tour_length(instance, tour);
  return tour;
}

BaselineResult greedy_edge(const TspInstance& instance) {
  std::vector<EdgeId> order(instance.num_edges());
  std::iota(order.begin(), order.end(), EdgeId{0});
  std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    return instance.distance(a) < instance.distance(b);
  });
  return {complete_tour(instance, {}, order), BaselineMethod::GreedyEdge};
}

BaselineResult held_karp_exact(const TspInstance& instance) {
  const std::size_t n = instance.num_nodes();
  if (n > kHeldKarpMaxNodes) {
    throw SizeError("Held-Karp is capped at " + std::to_string(kHeldKarpMaxNodes) + " cities, got " +
                    std::to_string(n));
  }
  // Node 0 is the fixed start; subsets range over nodes 1..n-1.
  const std::size_t m = n - 1;
  const std::size_t full = std::size_t{1} << m;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(full * m, kInf);
  std::vector<std::uint8_t> parent(full * m, 0);
  for (std::size_t j = 0; j < m; ++j) cost[(std::size_t{1} << j) * m + j] = instance.distance(0, j + 1);

  for (std::size_t mask = 1; mask < full; ++mask) {
    for (std::size_t last = 0; last < m; ++last) {
      if (!(mask & (std::size_t{1} << last))) continue;
      const double base = cost[mask * m + last];
      if (base == kInf) continue;
      for (std::size_t next = 0; next < m; ++next) {
        if (mask & (std::size_t{1} << next)) continue;
        const std::size_t grown = mask | (std::size_t{1} << next);
        const double c = base + instance.distance(static_cast<NodeId>(last + 1), static_cast<NodeId>(next + 1));
        if (c < cost[grown * m + next]) {
          cost[grown * m + next] = c;
          parent[grown * m + next] = static_cast<std::uint8_t>(last);
        }
      }
    }
  }

  const std::size_t all = full - 1;
  std::size_t last = 0;
  double best = kInf;
  for (std::size_t j = 0; j < m; ++j) {
    const double c = cost[all * m + j] + instance.distance(static_cast<NodeId>(j + 1), 0);
    if (c < best) {
      best = c;
      last = j;
    }
  }
  std::vector<NodeId> order;
  order.reserve(n);
  std::size_t mask = all;
  while (mask != 0) {
    order.push_back(static_cast<NodeId>(last + 1));
    const std::size_t prev = parent[mask * m + last];
    mask &= ~(std::size_t{1} << last);
    last = prev;
  }
  order.push_back(0);
  std::reverse(order.begin(), order.end());
  return {make_tour(instance, order), BaselineMethod::HeldKarp};
}

}  // namespace augbp::tsp
