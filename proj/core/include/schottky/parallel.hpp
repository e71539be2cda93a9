#pragma once

#include <cstddef>
#include <functional>

namespace schottky {

/// Worker count: SCHOTTKY_KP_THREADS if set (>= 1), else hardware concurrency.
unsigned worker_count();

/// Runs fn(i) for i in [0, n) on up to worker_count() threads with static
/// contiguous chunks. fn must write only to slot i, so results do not depend on
/// the thread count. The first exception thrown (lowest chunk) is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace schottky
