#pragma once

#include <cstddef>
#include <functional>

namespace anisodec {

/// Worker count: ANISODEC_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Iterations must be independent; results are
/// expected to be written to per-index slots so the outcome does not depend on
/// scheduling. The first exception thrown by any iteration is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace anisodec
