#pragma once

#include <cstdint>
#include <functional>

namespace weakflow {

/// Number of worker threads for internal parallel maps.
/// Controlled by the WEAKFLOW_THREADS environment variable; defaults to the
/// hardware concurrency. Always at least 1.
int parallelism_width();

/// Runs body(i) for i in [0, n). Iterations must be independent and write to
/// disjoint locations; results do not depend on the thread count. Reductions
/// stay serial on the caller side so that report files are bit-stable.
void parallel_for(long n, const std::function<void(long)>& body);

}  // namespace weakflow
