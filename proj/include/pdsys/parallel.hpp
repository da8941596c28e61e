#pragma once

#include <cstddef>
#include <functional>

namespace pdsys {

/// Number of worker threads used by parallel sweeps. Zero selects the
/// hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls body(begin, end) on disjoint contiguous chunks covering [0, n).
/// Chunk boundaries depend only on n and the thread count, and every index is
/// visited exactly once, so results written per index are deterministic.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace pdsys
