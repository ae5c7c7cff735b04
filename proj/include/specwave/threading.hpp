#pragma once

#include <cstddef>
#include <functional>

namespace specwave {

// Global worker count for the embarrassingly parallel loops (per-mode and
// per-trial work). 1 disables threading entirely; results are identical at
// any count because every task writes a disjoint slot.
void set_thread_count(int count);
int thread_count();

// Runs fn(i) for i in [0, n). Splits into contiguous chunks when the global
// worker count exceeds 1 and n is large enough to be worth the spawn cost.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace specwave
