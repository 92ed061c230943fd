#pragma once

#include <cstddef>
#include <functional>

namespace ridgeprox {

/// Worker count: RIDGEPROX_THREADS if set and positive, else hardware concurrency.
std::size_t thread_count();

/// Calls body(i) for i in [0, n) across up to thread_count() threads.
/// Indices are handed out in contiguous blocks; body must only write to
/// per-index state. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ridgeprox
