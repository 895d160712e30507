#include "augbp/rng.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace augbp {

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

DiscreteSampler::DiscreteSampler(std::span<const double> weights) {
  cumulative_.reserve(weights.size());
  double acc = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("DiscreteSampler: negative weight");
    acc += w;
    cumulative_.push_back(acc);
  }
  if (!(acc > 0.0)) throw std::invalid_argument("DiscreteSampler: weights sum to zero");
}

std::size_t DiscreteSampler::operator()(Rng& rng) const {
  const double target = rng.uniform01() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  const auto idx = static_cast<std::size_t>(it - cumulative_.begin());
  // Zero-weight tail entries share the final cumulative value; step back
  // onto the last entry that carries mass.
  if (idx >= cumulative_.size()) {
    std::size_t j = cumulative_.size() - 1;
    while (j > 0 && cumulative_[j - 1] == cumulative_[j]) --j;
    return j;
  }
  return idx;
}

}  // namespace augbp
