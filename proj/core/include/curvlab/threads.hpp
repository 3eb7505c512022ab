#pragma once

#include <functional>

namespace curvlab {

/// Worker count: min(hardware_concurrency, CURVLAB_THREADS) when the env var
/// is set, hardware_concurrency otherwise, never below 1.
int thread_count();

/// Chunked parallel loop over [0, count). Runs inline when count is small or
/// a single worker is configured. fn must be safe to call concurrently for
/// distinct indices.
void parallel_for(long count, const std::function<void(long)>& fn);

}  // namespace curvlab
