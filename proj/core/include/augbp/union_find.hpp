#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace augbp {

/// Disjoint-set forest with union by size and path halving.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);

  std::size_t find(std::size_t x) noexcept;
  /// Returns false when x and y were already in the same set.
  bool unite(std::size_t x, std::size_t y) noexcept;
  bool same(std::size_t x, std::size_t y) noexcept { return find(x) == find(y); }
  std::size_t set_size(std::size_t x) noexcept { return size_[find(x)]; }
  std::size_t count() const noexcept { return count_; }
  std::size_t universe() const noexcept { return parent_.size(); }

  /// Sets listed by their smallest member; members ascending.
  std::vector<std::vector<std::uint32_t>> groups();

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t count_;
};

}  // namespace augbp
