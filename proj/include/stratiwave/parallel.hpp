#pragma once

#include <cstddef>
#include <functional>

namespace stratiwave {

/// Worker count: hardware concurrency capped by STRATIWAVE_THREADS.
unsigned worker_count();

/// Runs body(i) for i in [0, n). Each index is handled exactly once and
/// bodies must only write to slots owned by their index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace stratiwave
