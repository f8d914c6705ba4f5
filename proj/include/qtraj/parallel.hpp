#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qtraj {

/// Runs fn(item, worker) for item in [0, count) on `workers` threads pulling
/// items from a shared counter. If any call throws, the exception from the
/// lowest item index is rethrown after all threads join.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  const int nthreads = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(count, 1))));
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::size_t first_error_item = count;
  const auto body = [&](int worker) {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i, worker);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < first_error_item) {
          first_error_item = i;
          first_error = std::current_exception();
        }
      }
    }
  };
  if (nthreads == 1) {
    body(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int w = 0; w < nthreads; ++w) pool.emplace_back(body, w);
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace qtraj
