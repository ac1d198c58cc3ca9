#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace mwt {

/// Process-wide worker count for transmitter-level parallelism (CLI --threads).
/// 0 means hardware concurrency.
inline std::atomic<int>& thread_count_setting() {
  static std::atomic<int> count{0};
  return count;
}

inline void set_thread_count(int n) { thread_count_setting().store(n); }

inline int thread_count() {
  const int n = thread_count_setting().load();
  if (n > 0) return n;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Run f(0..n-1) across workers. Each index writes only its own outputs, so
/// results do not depend on scheduling.
inline void parallel_for(int n, const std::function<void(int)>& f) {
  const int workers = std::min(n, thread_count());
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      try {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failed.load()) std::rethrow_exception(error);
}

}  // namespace mwt
