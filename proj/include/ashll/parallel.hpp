#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ashll {

/// Worker count from ASHLL_THREADS (default 1).
inline int thread_count_from_env() {
  if (const char* s = std::getenv("ASHLL_THREADS")) {
    try {
      return std::max(1, std::stoi(s));
    } catch (...) {
      return 1;
    }
  }
  return 1;
}

/// Calls body(k) for k in [0, n) over contiguous chunks. Each k must touch
/// only its own output slots, so results do not depend on the thread count.
template <class Body>
void parallel_for(int n, int threads, Body&& body) {
  if (threads <= 1 || n < 2 * threads) {
    for (int k = 0; k < n; ++k) body(k);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        for (int k = begin; k < end; ++k) body(k);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace ashll
