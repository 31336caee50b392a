#pragma once

#include <cstddef>
#include <functional>

namespace presslab {

// Runs fn(i) for i in [0, count). With threads > 1 the index space is split
// into contiguous chunks, one worker each; every fn(i) must write only to its
// own slot so results do not depend on the thread count.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

// Process-wide worker count used by the parallel maps (pool weights, local
// pressure traces). Results are identical for every setting.
void set_worker_threads(int threads);
int worker_threads();

}  // namespace presslab
