#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace effham::detail {

// Runs fn(0..n-1) across `threads` workers in contiguous blocks. Callers
// write to disjoint preallocated slots, so the result does not depend on
// scheduling. The first exception thrown by fn is rethrown after the join.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::clamp(threads, 1, std::max(1, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(threads));
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int t = 0; t < threads; ++t) {
    int begin = static_cast<int>(static_cast<long long>(n) * t / threads);
    int end = static_cast<int>(static_cast<long long>(n) * (t + 1) / threads);
    workers.emplace_back([begin, end, &fn, &error, &error_mutex] {
      try {
        for (int i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace effham::detail
