#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace commshare {

// Worker count from COALITION_THREADS, else hardware concurrency (min 1).
std::size_t worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads. Every index
// is visited exactly once; callers write results to slot i so the outcome
// does not depend on scheduling. The exception from the lowest failing index
// is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace commshare
