#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "augbp/error.hpp"
#include "augbp/tsp_instance.hpp"

using namespace augbp;
using namespace augbp::tsp;

namespace {

TspInstance small_instance(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::vector<std::pair<double, double>> pts(n);
  for (auto& p : pts) p = {coord(gen), coord(gen)};
  return TspInstance::from_function(n, [&](NodeId u, NodeId v) {
    return std::hypot(pts[u].first - pts[v].first, pts[u].second - pts[v].second);
  });
}

}  // namespace

TEST_CASE("edge ids enumerate unordered pairs lexicographically") {
  for (std::size_t n : {3u, 4u, 7u, 12u}) {
    const auto inst = small_instance(n, n);
    CHECK(inst.num_edges() == n * (n - 1) / 2);
    EdgeId expected = 0;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        CHECK(inst.edge_id(u, v) == expected);
        CHECK(inst.edge_id(v, u) == expected);
        CHECK(inst.endpoints(expected) == std::pair<NodeId, NodeId>{u, v});
        ++expected;
      }
    }
    for (NodeId v = 0; v < n; ++v) {
      const auto incident = inst.incident_edges(v);
      CHECK(incident.size() == n - 1);
      CHECK(std::is_sorted(incident.begin(), incident.end()));
      for (const EdgeId e : incident) {
        const auto [a, b] = inst.endpoints(e);
        CHECK((a == v || b == v));
      }
    }
  }
}

TEST_CASE("construction validates its input") {
  CHECK_THROWS_AS(TspInstance(2, {1.0}), InvalidInstance);
  CHECK_THROWS_AS(TspInstance(3, {1.0, 2.0}), InvalidInstance);
  CHECK_THROWS_AS(TspInstance(3, {1.0, -2.0, 3.0}), InvalidInstance);
  CHECK_THROWS_AS(TspInstance(3, {1.0, NAN, 3.0}), InvalidInstance);
  const std::vector<double> asymmetric{0, 1, 2, 1, 0, 3, 2, 4, 0};
  CHECK_THROWS_AS(TspInstance::from_matrix(3, asymmetric), InvalidInstance);
  const std::vector<double> symmetric{0, 1, 2, 1, 0, 3, 2, 3, 0};
  const auto inst = TspInstance::from_matrix(3, symmetric, "tri");
  CHECK(inst.name() == "tri");
  CHECK(inst.distance(0, 1) == 1.0);
  CHECK(inst.distance(2, 1) == 3.0);
  CHECK(inst.distance(1, 1) == 0.0);
}

TEST_CASE("median and maximum distance") {
  // Sorted distances 1 2 3 4 5 6: the lower median is 3.
  const TspInstance inst(4, {6.0, 1.0, 4.0, 2.0, 5.0, 3.0});
  CHECK(inst.median_distance() == 3.0);
  CHECK(inst.max_distance() == 6.0);
  const TspInstance odd(3, {9.0, 1.0, 5.0});
  CHECK(odd.median_distance() == 5.0);
}

TEST_CASE("tour validation and length") {
  // Square with unit sides and diagonals sqrt(2).
  const double r = std::sqrt(2.0);
  const auto inst = TspInstance::from_matrix(4, std::vector<double>{0, 1, r, 1, 1, 0, 1, r, r, 1, 0, 1, 1, r, 1, 0});
  const NodeId order[] = {0, 1, 2, 3};
  const Tour square = make_tour(inst, order);
  CHECK(square.edges.size() == 4);
  CHECK(std::is_sorted(square.edges.begin(), square.edges.end()));
  CHECK(square.length == doctest::Approx(4.0));
  CHECK(tour_length(inst, square) == doctest::Approx(4.0));
  const NodeId crossed[] = {0, 2, 1, 3};
  CHECK(make_tour(inst, crossed).length == doctest::Approx(2.0 + 2.0 * r));

  const std::vector<EdgeId> too_few{inst.edge_id(0, 1), inst.edge_id(1, 2), inst.edge_id(2, 3)};
  CHECK_FALSE(is_valid_tour(inst, too_few));
  CHECK_THROWS_AS(validate_tour(inst, too_few), InvalidTour);
  const std::vector<EdgeId> bad_degree{inst.edge_id(0, 1), inst.edge_id(0, 2), inst.edge_id(0, 3),
                                       inst.edge_id(1, 2)};
  CHECK_FALSE(is_valid_tour(inst, bad_degree));
  const NodeId bad_order[] = {0, 1, 1, 3};
  CHECK_THROWS_AS(make_tour(inst, bad_order), InvalidTour);
}

TEST_CASE("two disjoint triangles are not a tour") {
  const auto inst = small_instance(6, 3);
  const std::vector<EdgeId> triangles{inst.edge_id(0, 1), inst.edge_id(1, 2), inst.edge_id(0, 2),
                                      inst.edge_id(3, 4), inst.edge_id(4, 5), inst.edge_id(3, 5)};
  CHECK_FALSE(is_valid_tour(inst, triangles));
}

TEST_CASE("tour order round-trips") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + trial % 10;
    const auto inst = small_instance(n, trial);
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), gen);
    const Tour tour = make_tour(inst, order);
    const auto back = tour_order(inst, tour);
    CHECK(back.front() == 0);
    CHECK(std::set<NodeId>(back.begin(), back.end()).size() == n);
    CHECK(make_tour(inst, back).edges == tour.edges);
  }
}
