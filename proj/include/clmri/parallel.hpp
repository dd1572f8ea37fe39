#pragma once

#include <cstddef>
#include <functional>

namespace clmri {

// Number of worker threads used by parallel_for. Defaults to the hardware
// concurrency, overridable via set_worker_count or the CLMRI_THREADS
// environment variable (read once at startup).
std::size_t worker_count();
void set_worker_count(std::size_t n);

// Runs fn(begin, end) over a static partition of [0, n). Results must not
// depend on the partition: callers write disjoint output slots and perform
// any reductions in index order afterwards, so output is bit-identical for
// every thread count. Not reentrant; do not nest.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace clmri
