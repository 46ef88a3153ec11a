#pragma once

#include <cstddef>
#include <functional>

namespace hallmhd {

/// Worker count: hardware concurrency, capped by the HALLMHD_THREADS
/// environment variable when it holds a positive integer.
unsigned thread_count();

/// Runs body(i) for i in [0, count). Each index is handled by exactly one
/// thread, so results do not depend on the thread count. The first exception
/// thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hallmhd
