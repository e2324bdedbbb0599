#pragma once

#include <cstdint>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace nil {

// Parallelism degree for sampling kernels. jobs == 1 runs the serial
// reference path; jobs == 0 means the OpenMP default. Results are identical
// either way: every kernel writes independent slots and reductions use a
// total order, so thread count never changes output.
struct ParallelOptions {
  int jobs = 0;
};

inline int effective_jobs(const ParallelOptions& opts) {
#if defined(_OPENMP)
  if (opts.jobs <= 0) return omp_get_max_threads();
  return opts.jobs;
#else
  (void)opts;
  return 1;
#endif
}

template <class F>
void parallel_for(std::int64_t n, const ParallelOptions& opts, F&& body) {
  const int jobs = effective_jobs(opts);
  if (jobs <= 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 16) num_threads(jobs)
  for (std::int64_t i = 0; i < n; ++i) body(i);
#else
  for (std::int64_t i = 0; i < n; ++i) body(i);
#endif
}

}  // namespace nil
