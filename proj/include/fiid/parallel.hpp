#pragma once

#include <cstddef>
#include <functional>

namespace fiid {

// Worker count: FIID_THREADS if set to a positive integer, else hardware concurrency.
unsigned worker_count();

// Calls body(i) for i in [0, count) on up to worker_count() threads. Callers
// write results into slot i, so output never depends on scheduling. The
// first exception thrown by a task is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fiid
