#pragma once

#include <cstddef>
#include <functional>

namespace csp {

/// Worker count used by parallel_for. 0 means hardware concurrency.
void set_thread_count(std::size_t threads);
std::size_t thread_count();

/// Splits [begin, end) into contiguous chunks, one per worker, and calls
/// body(chunk_begin, chunk_end) on each. Chunk boundaries depend only on the
/// range and the thread count, so writes to disjoint outputs stay
/// deterministic. Runs inline when the range is below `grain`.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t grain = 1024);

}  // namespace csp
