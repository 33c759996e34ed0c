#ifndef PICKDROP_PARALLEL_HPP_
#define PICKDROP_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace pickdrop {

// Worker count from PICKDROP_THREADS, capped by the hardware; 1 when unset.
unsigned default_threads();

// Calls body(begin, end) on disjoint chunks covering [0, count). Chunks run on
// up to `threads` workers; the call returns after all of them finish and
// rethrows the first exception raised by a worker.
void parallel_chunks(std::size_t count, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace pickdrop

#endif  // PICKDROP_PARALLEL_HPP_
