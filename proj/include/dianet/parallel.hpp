#pragma once

#include <cstddef>
#include <functional>

namespace dianet {

// Worker cap: DIANET_THREADS if set to a positive integer, otherwise the
// hardware concurrency.
std::size_t max_workers();

// Runs fn(0..n-1) across up to max_workers() threads. Each index owns its
// output slot and derives its own seed, so results do not depend on the
// worker count. Nested calls run serially on the caller's thread. The first
// exception thrown by a task is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace dianet
