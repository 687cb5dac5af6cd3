#pragma once

#include <cstddef>
#include <functional>

namespace normnet {

// Worker count used by parallel loops: NORMNET_WORKERS when set, otherwise
// the hardware concurrency (at least 1).
int worker_count();

// Runs fn(i) for i in [0, count). Work items must be independent; callers
// that need deterministic output write to per-index slots. Exceptions from
// work items are rethrown on the calling thread (first one wins).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  int workers = 0);

}  // namespace normnet
