#pragma once

#include <cstddef>
#include <functional>

namespace paritylock {

void set_default_threads(int n);
int default_threads();

// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = default).
// Each index is handled exactly once; callers write results by index.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, int threads = 0);

}  // namespace paritylock
