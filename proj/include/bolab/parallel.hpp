#pragma once

#include <cstddef>
#include <functional>

namespace bolab {

/// Worker count: BO_LAB_THREADS if set (>= 1), else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index runs exactly once; results must
/// be written to per-index slots so output is independent of scheduling.
/// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bolab
