#pragma once

#include <cstddef>
#include <functional>

namespace semiflow {

/// Worker count: SEMIFLOW_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned thread_limit();

/// Runs fn(i) for i in [0, count) on up to thread_limit() threads. Each
/// index is handled exactly once; the first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace semiflow
