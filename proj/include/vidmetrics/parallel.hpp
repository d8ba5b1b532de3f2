#pragma once

#include <cstddef>
#include <functional>

namespace vidmetrics {

/// Worker count: VIDMETRICS_THREADS if set and positive, else hardware
/// concurrency. Callers must write results by index so the count never
/// changes output.
std::size_t worker_count();

/// Runs body(i) for i in [0, n), split into contiguous chunks across workers.
/// The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace vidmetrics
