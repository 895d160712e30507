#include "augbp/union_find.hpp"

#include <numeric>
#include <utility>

namespace augbp {

DisjointSets::DisjointSets(std::size_t n) : parent_(n), size_(n, 1), count_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::find(std::size_t x) noexcept {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSets::unite(std::size_t x, std::size_t y) noexcept {
  x = find(x);
  y = find(y);
  if (x == y) return false;
  if (size_[x] < size_[y]) std::swap(x, y);
  parent_[y] = x;
  size_[x] += size_[y];
  --count_;
  return true;
}

std::vector<std::vector<std::uint32_t>> DisjointSets::groups() {
  const std::size_t n = parent_.size();
  std::vector<std::size_t> slot(n, n);
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(count_);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t root = find(v);
    if (slot[root] == n) {
      slot[root] = out.size();
      out.emplace_back();
    }
    out[slot[root]].push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

}  // namespace augbp
