#pragma once

#include <cstddef>
#include <functional>

namespace lrisp {

/// Worker count: LRISP_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int thread_count();

/// Calls fn(i) once for every i in [0, n) on up to `threads` workers
/// (0 means thread_count()). Results must go to per-index slots, so the
/// outcome does not depend on scheduling. If any call throws, the exception
/// of the lowest failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

}  // namespace lrisp
