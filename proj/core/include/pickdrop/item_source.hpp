#ifndef PICKDROP_ITEM_SOURCE_HPP_
#define PICKDROP_ITEM_SOURCE_HPP_

#include <algorithm>
#include <cstddef>
#include <span>

#include "pickdrop/stream.hpp"

namespace pickdrop {

// Pull-based, single-pass producer of stream items. Once fill() returns 0 the
// source is exhausted and stays exhausted; there is no rewind.
class ItemSource {
 public:
  virtual ~ItemSource() = default;

  // Writes up to out.size() items and returns how many were written.
  virtual std::size_t fill(std::span<ElementId> out) = 0;
};

class SpanSource final : public ItemSource {
 public:
  explicit SpanSource(std::span<const ElementId> items) : items_(items) {}

  std::size_t fill(std::span<ElementId> out) override {
    const std::size_t n = std::min(out.size(), items_.size() - pos_);
    std::copy_n(items_.begin() + static_cast<std::ptrdiff_t>(pos_), n, out.begin());
    pos_ += n;
    return n;
  }

 private:
  std::span<const ElementId> items_;
  std::size_t pos_ = 0;
};

// Default read granularity for consumers that drain a source in blocks.
inline constexpr std::size_t kSourceBlock = 1 << 14;

}  // namespace pickdrop

#endif  // PICKDROP_ITEM_SOURCE_HPP_
