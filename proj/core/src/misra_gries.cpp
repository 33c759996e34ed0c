#include "pickdrop/misra_gries.hpp"

#include <algorithm>

#include "pickdrop/error.hpp"

namespace pickdrop {

MisraGries::MisraGries(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw Error(ErrorKind::kUsage, "Misra-Gries needs at least one counter");
  counters_.reserve(capacity_);
}

// Counts are stored with the global decrement offset folded in, so a
// decrement-all step is O(1) amortized: bump the offset, then evict the
// counters that reached zero.
void MisraGries::push(ElementId x) {
  for (auto& c : counters_) {
    if (c.element == x) {
      ++c.count;
      return;
    }
  }
  if (counters_.size() < capacity_) {
    counters_.push_back({x, offset_ + 1});
    return;
  }
  ++offset_;
  std::erase_if(counters_, [this](const Counter& c) { return c.count <= offset_; });
}

Estimate MisraGries::best() const {
  Estimate best;
  for (const auto& c : counters_) {
    const std::uint64_t count = c.count - offset_;
    if (count > best.count || (count == best.count && count > 0 && c.element < best.element)) {
      best = {c.element, count};
    }
  }
  return best;
}

}  // namespace pickdrop
