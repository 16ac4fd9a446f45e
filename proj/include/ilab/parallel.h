#pragma once

#include <cstddef>
#include <functional>

namespace ilab {

/// Worker count: the explicit request if nonzero, else INCIDENCE_LAB_THREADS,
/// else the hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested = 0);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index runs
/// exactly once; callers write results into per-index slots so the merge
/// order is independent of scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace ilab
