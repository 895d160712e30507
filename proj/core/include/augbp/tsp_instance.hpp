#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace augbp::tsp {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Symmetric TSP on the complete graph over `n` cities.
///
/// Edges are the unordered pairs {u, v}, u < v, numbered in lexicographic
/// order: (0,1), (0,2), ..., (0,n-1), (1,2), ... Distances must be finite
/// and non-negative.
class TspInstance {
 public:
  /// `distances` holds one entry per edge in edge-id order.
  TspInstance(std::size_t n, std::vector<double> distances, std::string name = {});

  /// Builds from a row-major n x n matrix; the matrix must be symmetric.
  static TspInstance from_matrix(std::size_t n, std::span<const double> matrix,
                                 std::string name = {});
  static TspInstance from_function(std::size_t n,
                                   const std::function<double(NodeId, NodeId)>& distance,
                                   std::string name = {});

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return distances_.size(); }
  const std::string& name() const noexcept { return name_; }

  EdgeId edge_id(NodeId u, NodeId v) const noexcept;
  std::pair<NodeId, NodeId> endpoints(EdgeId e) const noexcept { return {tail_[e], head_[e]}; }
  double distance(EdgeId e) const noexcept { return distances_[e]; }
  double distance(NodeId u, NodeId v) const noexcept {
    return u == v ? 0.0 : distances_[edge_id(u, v)];
  }
  std::span<const double> distances() const noexcept { return distances_; }

  /// Edges incident to `v`, ascending by edge id.
  std::vector<EdgeId> incident_edges(NodeId v) const;

  /// Lower median of the edge distances.
  double median_distance() const;
  double max_distance() const;

 private:
  std::size_t n_;
  std::vector<double> distances_;
  std::vector<NodeId> tail_;
  std::vector<NodeId> head_;
  std::string name_;
};

/// Hamiltonian cycle given by its n edges (ascending edge ids).
struct Tour {
  std::vector<EdgeId> edges;
  double length = 0.0;
};

/// Throws InvalidTour unless `edges` is a single cycle through all nodes.
void validate_tour(const TspInstance& instance, std::span<const EdgeId> edges);
bool is_valid_tour(const TspInstance& instance, std::span<const EdgeId> edges);

/// Validates, then sums the edge distances.
double tour_length(const TspInstance& instance, const Tour& tour);

/// Tour through the cities in the given visiting order.
Tour make_tour(const TspInstance& instance, std::span<const NodeId> order);

/// Visiting order starting at city 0.
std::vector<NodeId> tour_order(const TspInstance& instance, const Tour& tour);

}  // namespace augbp::tsp
