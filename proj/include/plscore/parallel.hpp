#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace plscore {

/// Worker count used by parallel_for. Defaults to PLSCORE_THREADS or the
/// hardware concurrency.
unsigned num_threads();
void set_num_threads(unsigned n);

namespace detail {
inline thread_local bool in_parallel_region = false;
}

/// Runs body(i) for i in [0, n). Results must be written to per-index
/// slots; nested calls run serially. If any iteration throws, the exception
/// of the lowest failing index is rethrown so failures are reproducible.
template <class Body>
void parallel_for(std::ptrdiff_t n, Body&& body) {
  const auto workers = static_cast<std::ptrdiff_t>(
      std::min<std::ptrdiff_t>(num_threads(), n));
  if (workers <= 1 || detail::in_parallel_region) {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::ptrdiff_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::ptrdiff_t first_index = n;

  auto work = [&] {
    detail::in_parallel_region = true;
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= n) break;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(err_mutex);
        if (i < first_index) {
          first_index = i;
          first_error = std::current_exception();
        }
      }
    }
    detail::in_parallel_region = false;
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::ptrdiff_t t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace plscore
