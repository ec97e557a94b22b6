#pragma once
#include <cstddef>
#include <functional>

namespace specgap {

/// Worker count: SPECGAP_THREADS if set (>= 1), else hardware concurrency.
unsigned thread_count();

/// Calls body(i) for i in [0, count). Indices are split into contiguous static chunks, so results
/// written per index do not depend on the number of threads. The first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace specgap
