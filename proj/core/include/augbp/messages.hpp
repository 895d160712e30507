#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace augbp::mp {

using EdgeId = std::uint32_t;

/// Binary message stored as M(1) - M(0); M(0) is fixed at zero.
using NormalizedMessage = double;

/// Damping weight applied to fresh messages. Always in (0, 1].
class DampingFactor {
 public:
  explicit DampingFactor(double lambda);

  double value() const noexcept { return lambda_; }

 private:
  double lambda_;
};

/// Keeps the three smallest (value, source) pairs seen so far, ascending.
/// Equal values are ordered by source id so sweeps are reproducible.
class Top3Tracker {
 public:
  struct Entry {
    double value;
    EdgeId source;
  };

  void insert(double value, EdgeId source) noexcept {
    ++inserted_;
    if (size_ == 3 && value > entries_[2].value) return;
    insert_slow(value, source);
  }
  void clear() noexcept {
    size_ = 0;
    inserted_ = 0;
  }

  std::span<const Entry> entries() const noexcept { return {entries_.data(), size_}; }
  std::size_t size() const noexcept { return size_; }
  std::size_t inserted() const noexcept { return inserted_; }

 private:
  void insert_slow(double value, EdgeId source) noexcept;

  std::array<Entry, 3> entries_{};
  std::size_t size_ = 0;
  std::size_t inserted_ = 0;
};

/// Second smallest tracked value after dropping the entry whose source is
/// `excluded`. Three cached entries are enough since at most one matches.
/// Throws ArityError when fewer than two values remain.
double min2_excluding(const Top3Tracker& tracker, EdgeId excluded);

inline NormalizedMessage damp(NormalizedMessage old, NormalizedMessage fresh,
                              DampingFactor lambda) noexcept {
  return old + lambda.value() * (fresh - old);
}

}  // namespace augbp::mp
