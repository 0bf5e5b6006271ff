#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <utility>

#if defined(SIMPARR_HAS_OPENMP)
#include <omp.h>
#endif

namespace simparr::par {

// Runtime switch between the OpenMP kernels and the serial reference path.
// Both paths must produce byte-identical results: every iteration writes only
// its own pre-indexed output slot, so the schedule cannot affect the result.
inline bool& parallel_flag() {
#if defined(SIMPARR_HAS_OPENMP)
  static bool flag = true;
#else
  static bool flag = false;
#endif
  return flag;
}

inline bool parallel_enabled() {
#if defined(SIMPARR_HAS_OPENMP)
  return parallel_flag();
#else
  return false;
#endif
}

inline void set_parallel(bool on) { parallel_flag() = on; }

// Runs fn(i) for i in [0, n). Exceptions thrown by iterations are captured;
// the one from the lowest index is rethrown after the loop so the error seen
// matches the serial reference path.
template <class Fn>
void for_indexed(std::size_t n, Fn&& fn) {
#if defined(SIMPARR_HAS_OPENMP)
  if (parallel_enabled() && n > 1) {
    std::exception_ptr err;
    std::size_t err_index = n;
    std::mutex err_mutex;
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (static_cast<std::size_t>(i) < err_index) {
          err_index = static_cast<std::size_t>(i);
          err = std::current_exception();
        }
      }
    }
    if (err) std::rethrow_exception(err);
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace simparr::par
