#include "augbp/messages.hpp"

#include <stdexcept>
#include <string>

#include "augbp/error.hpp"

namespace augbp::mp {

DampingFactor::DampingFactor(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("damping factor must lie in (0, 1], got " + std::to_string(lambda));
  }
}

void Top3Tracker::insert_slow(double value, EdgeId source) noexcept {
  auto less = [](double v, EdgeId s, const Entry& e) {
    return v < e.value || (v == e.value && s < e.source);
  };
  std::size_t pos = size_;
  while (pos > 0 && less(value, source, entries_[pos - 1])) --pos;
  if (pos >= 3) return;
  const std::size_t last = size_ < 3 ? size_ : 2;
  for (std::size_t i = last; i > pos; --i) entries_[i] = entries_[i - 1];
  entries_[pos] = {value, source};
  if (size_ < 3) ++size_;
}

double min2_excluding(const Top3Tracker& tracker, EdgeId excluded) {
  std::size_t seen = 0;
  bool skipped = false;
  for (const auto& entry : tracker.entries()) {
    if (!skipped && entry.source == excluded) {
      skipped = true;
      continue;
    }
    if (++seen == 2) return entry.value;
  }
  throw ArityError("min[2] needs two incoming messages besides the excluded edge (tracked " +
                   std::to_string(tracker.size()) + ")");
}

}  // namespace augbp::mp
