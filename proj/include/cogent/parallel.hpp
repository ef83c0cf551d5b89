#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace cogent {

/// Execution mode for data-parallel kernels. Serial is the reference path; Parallel runs
/// the same per-item work under OpenMP and must produce identical results.
enum class Exec { Serial, Parallel };

/// 0 restores the OpenMP default.
void set_thread_count(int threads);
int thread_count();

/// Calls fn(i) for i in [0, count). The first exception thrown by any item is rethrown
/// after the loop.
template <typename Fn>
void parallel_for(std::size_t count, Exec exec, Fn&& fn) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex mutex;
  const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace cogent
