#include "augbp/tsp_instance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "augbp/error.hpp"
#include "augbp/union_find.hpp"

namespace augbp::tsp {

TspInstance::TspInstance(std::size_t n, std::vector<double> distances, std::string name)
    : n_(n), distances_(std::move(distances)), name_(std::move(name)) {
  if (n_ < 3) throw InvalidInstance("a TSP instance needs at least 3 cities, got " + std::to_string(n_));
  const std::size_t m = n_ * (n_ - 1) / 2;
  if (distances_.size() != m) {
    throw InvalidInstance("expected " + std::to_string(m) + " edge distances, got " +
                          std::to_string(distances_.size()));
  }
  for (double d : distances_) {
    if (!std::isfinite(d) || d < 0.0) throw InvalidInstance("edge distances must be finite and non-negative");
  }
  tail_.reserve(m);
  head_.reserve(m);
  for (NodeId u = 0; u < n_; ++u) {
    for (NodeId v = u + 1; v < n_; ++v) {
      tail_.push_back(u);
      head_.push_back(v);
    }
  }
}

TspInstance TspInstance::from_matrix(std::size_t n, std::span<const double> matrix, std::string name) {
  if (matrix.size() != n * n) throw InvalidInstance("distance matrix must be n x n");
  std::vector<double> d;
  d.reserve(n * (n - 1) / 2);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (matrix[u * n + v] != matrix[v * n + u]) {
        throw InvalidInstance("distance matrix is not symmetric at (" + std::to_string(u) + ", " +
                              std::to_string(v) + ")");
      }
      d.push_back(matrix[u * n + v]);
    }
  }
  return TspInstance(n, std::move(d), std::move(name));
}

TspInstance TspInstance::from_function(std::size_t n,
                                       const std::function<double(NodeId, NodeId)>& distance,
                                       std::string name) {
  std::vector<double> d;
  d.reserve(n * (n > 0 ? n - 1 : 0) / 2);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) d.push_back(distance(u, v));
  }
  return TspInstance(n, std::move(d), std::move(name));
}

EdgeId TspInstance::edge_id(NodeId u, NodeId v) const noexcept {
  if (u > v) std::swap(u, v);
  const std::size_t row = static_cast<std::size_t>(u);
  return static_cast<EdgeId>(row * n_ - row * (row + 1) / 2 + (v - u - 1));
}

std::vector<EdgeId> TspInstance::incident_edges(NodeId v) const {
  std::vector<EdgeId> out;
  out.reserve(n_ - 1);
  for (NodeId u = 0; u < n_; ++u) {
    if (u != v) out.push_back(edge_id(u, v));
  }
  // Ids of (u, v) with u < v precede those with u > v, so the list is sorted.
  return out;
}

double TspInstance::median_distance() const {
  std::vector<double> sorted(distances_.begin(), distances_.end());
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>((sorted.size() - 1) / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  return *mid;
}

double TspInstance::max_distance() const {
  return *std::max_element(distances_.begin(), distances_.end());
}

namespace {

std::string tour_problem(const TspInstance& instance, std::span<const EdgeId> edges) {
  const std::size_t n = instance.num_nodes();
  if (edges.size() != n) {
    return "tour has " + std::to_string(edges.size()) + " edges, expected " + std::to_string(n);
  }
  std::vector<int> degree(n, 0);
  DisjointSets sets(n);
  for (EdgeId e : edges) {
    if (e >= instance.num_edges()) return "edge id " + std::to_string(e) + " out of range";
    const auto [u, v] = instance.endpoints(e);
    ++degree[u];
    ++degree[v];
    sets.unite(u, v);
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (degree[v] != 2) {
      return "node " + std::to_string(v) + " has tour degree " + std::to_string(degree[v]);
    }
  }
  if (sets.count() != 1) return "tour splits into " + std::to_string(sets.count()) + " cycles";
  return {};
}

}  // namespace

void validate_tour(const TspInstance& instance, std::span<const EdgeId> edges) {
  if (auto problem = tour_problem(instance, edges); !problem.empty()) throw InvalidTour(problem);
}

bool is_valid_tour(const TspInstance& instance, std::span<const EdgeId> edges) {
  return tour_problem(instance, edges).empty();
}

double tour_length(const TspInstance& instance, const Tour& tour) {
  validate_tour(instance, tour.edges);
  double total = 0.0;
  for (EdgeId e : tour.edges) total += instance.distance(e);
  return total;
}

Tour make_tour(const TspInstance& instance, std::span<const NodeId> order) {
  Tour tour;
  const std::size_t n = order.size();
  tour.edges.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    tour.edges.push_back(instance.edge_id(order[i], order[(i + 1) % n]));
  }
  std::sort(tour.edges.begin(), tour.edges.end());
  tour.length = tour_length(instance, tour);
  return tour;
}

std::vector<NodeId> tour_order(const TspInstance& instance, const Tour& tour) {
  validate_tour(instance, tour.edges);
  const std::size_t n = instance.num_nodes();
  std::vector<std::array<NodeId, 2>> next(n);
  std::vector<int> filled(n, 0);
  for (EdgeId e : tour.edges) {
    const auto [u, v] = instance.endpoints(e);
    next[u][filled[u]++] = v;
    next[v][filled[v]++] = u;
  }
  std::vector<NodeId> order;
  order.reserve(n);
  NodeId prev = 0;
  NodeId cur = 0;
  for (std::size_t i = 0; i < n; ++i) {
    order.push_back(cur);
    const NodeId step = (i == 0) ? std::min(next[cur][0], next[cur][1])
                                 : (next[cur][0] == prev ? next[cur][1] : next[cur][0]);
    prev = cur;
    cur = step;
  }
  return order;
}

}  // namespace augbp::tsp
