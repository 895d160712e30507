#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "augbp/error.hpp"
#include "augbp/messages.hpp"
#include "augbp/modularity.hpp"
#include "augbp/tsp_solver.hpp"
#include "support/oracles.hpp"

using namespace augbp;

namespace {

// Mixes continuous values, small integers (for ties) and clamp-sized values.
double draw_value(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> kind(0, 5);
  switch (kind(gen)) {
    case 0:
      return std::uniform_int_distribution<int>(-2, 2)(gen);
    case 1:
      return std::bernoulli_distribution(0.5)(gen) ? 1e6 : -1e6;
    default:
      return std::uniform_real_distribution<double>(-5.0, 5.0)(gen);
  }
}

mp::Top3Tracker track(const std::vector<double>& values, const std::vector<mp::EdgeId>& ids) {
  mp::Top3Tracker tracker;
  for (std::size_t i = 0; i < values.size(); ++i) tracker.insert(values[i], ids[i]);
  return tracker;
}

}  // namespace

TEST_CASE("Top3Tracker keeps the three smallest values with id tie-breaks") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = std::uniform_int_distribution<int>(1, 12)(gen);
    std::vector<std::pair<double, mp::EdgeId>> items;
    std::vector<mp::EdgeId> ids(k);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), gen);
    mp::Top3Tracker tracker;
    for (int i = 0; i < k; ++i) {
      const double v = draw_value(gen);
      items.emplace_back(v, ids[i]);
      tracker.insert(v, ids[i]);
    }
    std::sort(items.begin(), items.end());
    REQUIRE(tracker.size() == std::min<std::size_t>(3, items.size()));
    CHECK(tracker.inserted() == static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < tracker.size(); ++i) {
      CHECK(tracker.entries()[i].value == items[i].first);
      CHECK(tracker.entries()[i].source == items[i].second);
    }
  }
}

TEST_CASE("min2_excluding equals the second smallest of the remaining values") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = std::uniform_int_distribution<int>(3, 9)(gen);
    std::vector<double> values(k);
    std::vector<mp::EdgeId> ids(k);
    for (int i = 0; i < k; ++i) {
      values[i] = draw_value(gen);
      ids[i] = static_cast<mp::EdgeId>(10 * i + 3);
    }
    const auto tracker = track(values, ids);
    for (int skip = 0; skip < k; ++skip) {
      std::vector<double> rest;
      for (int i = 0; i < k; ++i) {
        if (i != skip) rest.push_back(values[i]);
      }
      std::sort(rest.begin(), rest.end());
      CHECK(mp::min2_excluding(tracker, ids[skip]) == rest[1]);
    }
    // An id outside the factor excludes nothing.
    std::vector<double> all = values;
    std::sort(all.begin(), all.end());
    CHECK(mp::min2_excluding(tracker, 1) == all[1]);
  }
}

TEST_CASE("min2_excluding needs two remaining values") {
  mp::Top3Tracker tracker;
  tracker.insert(1.0, 4);
  CHECK_THROWS_AS(mp::min2_excluding(tracker, 9), ArityError);
  tracker.insert(2.0, 5);
  CHECK_THROWS_AS(mp::min2_excluding(tracker, 4), ArityError);
  CHECK(mp::min2_excluding(tracker, 9) == 2.0);
  tracker.clear();
  CHECK(tracker.size() == 0);
  CHECK(tracker.inserted() == 0);
}

TEST_CASE("damping factor bounds and blending") {
  CHECK_THROWS_AS(mp::DampingFactor(0.0), std::invalid_argument);
  CHECK_THROWS_AS(mp::DampingFactor(1.5), std::invalid_argument);
  CHECK_THROWS_AS(mp::DampingFactor(-0.1), std::invalid_argument);
  CHECK(mp::DampingFactor(1.0).value() == 1.0);
  CHECK(mp::damp(2.0, 4.0, mp::DampingFactor(0.25)) == doctest::Approx(2.5));
  CHECK(mp::damp(2.0, 4.0, mp::DampingFactor(1.0)) == 4.0);
}

TEST_CASE("degree and subtour messages match tabular min-sum") {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 1500; ++trial) {
    const int k = std::uniform_int_distribution<int>(3, 8)(gen);
    std::vector<double> values(k);
    std::vector<mp::EdgeId> ids(k);
    for (int i = 0; i < k; ++i) {
      values[i] = draw_value(gen);
      ids[i] = static_cast<mp::EdgeId>(i);
    }
    const auto tracker = track(values, ids);
    // The oracle subtracts sums of inputs, so its rounding error scales with them.
    double magnitude = 1.0;
    for (const double v : values) magnitude = std::max(magnitude, std::abs(v));
    for (int i = 0; i < k; ++i) {
      const double degree = oracle::tabular_message(values, i, oracle::degree_allowed);
      const double subtour = oracle::tabular_message(values, i, oracle::subtour_allowed);
      CHECK(tsp::degree_message(tracker, ids[i]) == doctest::Approx(degree).epsilon(1e-12).scale(magnitude));
      CHECK(tsp::subtour_message(tracker, ids[i]) == doctest::Approx(subtour).epsilon(1e-12).scale(magnitude));
    }
  }
}

TEST_CASE("clique message matches tabular min-sum") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::vector<double> values{draw_value(gen), draw_value(gen), draw_value(gen)};
    for (int target = 0; target < 3; ++target) {
      const double expected = oracle::tabular_message(values, target, oracle::clique_allowed);
      const double a = values[(target + 1) % 3];
      const double b = values[(target + 2) % 3];
      CHECK(cluster::clique_message(a, b) == doctest::Approx(expected).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("hand-checked message values") {
  // Two strongly favoured edges satisfy the degree factor: the third is pushed out.
  const auto tracker = track({-3.0, -1.0, 4.0}, {0, 1, 2});
  CHECK(tsp::degree_message(tracker, 2) == 1.0);
  CHECK(tsp::degree_message(tracker, 0) == -4.0);
  CHECK(tsp::subtour_message(tracker, 2) == 0.0);
  // An unmet cut pulls every edge in by the second cheapest alternative.
  const auto cut = track({-2.0, 3.0, 5.0}, {0, 1, 2});
  CHECK(tsp::subtour_message(cut, 0) == -5.0);
  CHECK(tsp::subtour_message(cut, 2) == -3.0);
  CHECK(cluster::clique_message(-1.0, -2.0) == -1.0);
  CHECK(cluster::clique_message(3.0, 4.0) == 0.0);
  CHECK(cluster::clique_message(-1.0, 5.0) == 1.0);
}
