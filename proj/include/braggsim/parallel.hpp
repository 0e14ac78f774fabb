#pragma once

#include <cstddef>
#include <functional>

namespace braggsim {

// Worker count honoring BRAGGSIM_THREADS (unset or 0 means hardware
// concurrency).
unsigned thread_count();

// Calls body(i) for i in [0, n). Iterations must be independent; they are
// distributed over thread_count() workers in contiguous ranges.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace braggsim
