#pragma once

#include <cstddef>
#include <functional>

namespace dgbo {

// Worker count from DGBO_THREADS; unset or 0 means hardware concurrency.
unsigned thread_count();

// Runs body(i) for i in [0, n). Chunks are contiguous, so results written
// by index are independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dgbo
