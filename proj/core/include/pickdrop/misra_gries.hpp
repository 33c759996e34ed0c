#ifndef PICKDROP_MISRA_GRIES_HPP_
#define PICKDROP_MISRA_GRIES_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pickdrop/stream.hpp"

namespace pickdrop {

// Deterministic frequent-items summary with a fixed number of counters.
// Every stored count is a lower bound on the true frequency, and an element
// of frequency f is stored with count at least f - m / (capacity + 1).
//
// Covers the regimes the sampler does not: one element holding more than a
// tenth of the stream, or a stream shorter than the requested row width.
class MisraGries {
 public:
  explicit MisraGries(std::size_t capacity);

  void push(ElementId x);

  // Largest stored counter, smaller id on ties; sentinel when empty.
  Estimate best() const;

  std::size_t capacity() const noexcept { return capacity_; }

 private:
  struct Counter {
    ElementId element;
    std::uint64_t count;
  };

  std::vector<Counter> counters_;
  std::size_t capacity_;
  std::uint64_t offset_ = 0;  // total decrements applied to every live counter
};

}  // namespace pickdrop

#endif  // PICKDROP_MISRA_GRIES_HPP_
