#pragma once

#include <cstddef>
#include <functional>

namespace mormor {

/// Number of worker threads to use when the caller passes 0: the value of
/// MORMOR_THREADS if set, otherwise std::thread::hardware_concurrency().
int default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` threads. Indices are
/// split into contiguous blocks, so per-index writes need no locking. The
/// first exception thrown by any body is rethrown on the calling thread.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace mormor
