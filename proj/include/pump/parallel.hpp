#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pump {

// Chunked parallel loop over [0, n). The chunk function receives a
// contiguous [lo, hi) range. Callers must write results into per-index
// slots so the observable output is independent of the worker count.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t, std::size_t)>& chunk) {
  if (n == 0) return;
  if (workers < 1) workers = 1;
  std::size_t w = std::min<std::size_t>(workers, n);
  if (w <= 1) {
    chunk(0, n);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(w);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::size_t base = n / w, rem = n % w, lo = 0;
  for (std::size_t i = 0; i < w; ++i) {
    std::size_t hi = lo + base + (i < rem ? 1 : 0);
    threads.emplace_back([&, lo, hi] {
      try {
        chunk(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> g(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
    lo = hi;
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace pump
