#pragma once

// Minimal fork-join helper. Results are written by index, so callers get the
// same output for any worker count.

#include <cstddef>
#include <functional>

namespace holant {

/// Worker count from HOLANT_WORKERS, else the hardware concurrency (>= 1).
int worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. The first
/// exception thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace holant
