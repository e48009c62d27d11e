#pragma once

#include <cstddef>
#include <functional>

namespace thzo {

// Runs fn(0..n-1) across up to `workers` threads (inline when workers <= 1).
// Tasks are claimed from an atomic counter; the first exception thrown by any
// task is rethrown on the caller after all threads join. Work items must write
// to disjoint storage; result determinism is the caller's summation order.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn);

// Default worker count: hardware concurrency, at least 1.
int default_workers();

}  // namespace thzo
