#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace augbp {

/// Seedable generator used everywhere randomness is needed.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are not, so the conversions to
/// doubles and bounded integers are done here to keep generated fixtures
/// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// Samples indices proportionally to a fixed non-negative weight vector.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(std::span<const double> weights);

  std::size_t operator()(Rng& rng) const;

 private:
  std::vector<double> cumulative_;
};

}  // namespace augbp
