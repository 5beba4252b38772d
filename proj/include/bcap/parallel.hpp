#pragma once

#include <cstddef>
#include <functional>

namespace bcap {

/// Parallelism limit: min(hardware_concurrency, CAPACITY_THREADS) when the
/// env var holds a positive integer, otherwise hardware_concurrency.
int max_threads();

/// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = use
/// max_threads()). Work is index-addressed so results land in caller-owned
/// slots and output order never depends on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  int threads = 0);

}  // namespace bcap
