#pragma once

#include <cstddef>
#include <functional>

namespace sigscore {

// Thread count used by parallel_for: 0 means hardware concurrency. The
// SIGSCORE_THREADS environment variable seeds the initial value.
void set_thread_count(int threads);
int thread_count();

// Runs fn over [0, count) split into contiguous chunks, one per worker.
// Callers must only write to disjoint, index-addressed slots; the split is a
// pure function of (count, thread_count) so runs are reproducible.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t begin, std::size_t end)>& fn);

}  // namespace sigscore
