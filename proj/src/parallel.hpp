#pragma once

#include <cstddef>
#include <functional>

namespace bandcast::detail {

/// Worker count: BANDCAST_THREADS if set and positive, else hardware concurrency.
unsigned configured_threads();

/// Runs body(i) for i in [0, n), split into contiguous blocks across threads.
/// Falls back to a plain loop when `work` (a rough flop count) is small.
void parallel_for(std::size_t n, double work, const std::function<void(std::size_t)>& body);

}  // namespace bandcast::detail
