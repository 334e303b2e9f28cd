#pragma once

// Work distribution with results that do not depend on the number of
// threads: callers partition work into a fixed set of items and reduce the
// per-item results in index order.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "ball.hpp"

namespace bvk {

namespace detail {
inline std::atomic<int>& thread_budget_slot() {
  static std::atomic<int> n{std::max(1, static_cast<int>(std::thread::hardware_concurrency()))};
  return n;
}
}  // namespace detail

inline int thread_budget() { return detail::thread_budget_slot().load(); }
inline void set_thread_budget(int n) { detail::thread_budget_slot().store(std::max(1, n)); }

// Calls fn(i) for every i in [0, n). Workers inherit the caller's working
// precision. If any call throws, the exception from the smallest index is
// rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  int workers = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(thread_budget())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  int prec = working_precision();
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = n;
  std::exception_ptr failure;
  auto body = [&] {
    PrecisionScope scope(prec);
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Sum of per-block balls, always reduced in block order.
template <class Fn>
Ball blockwise_sum(std::size_t blocks, Fn&& block_value) {
  std::vector<Ball> parts(blocks);
  parallel_for(blocks, [&](std::size_t i) { parts[i] = block_value(i); });
  Ball total;
  for (const auto& p : parts) total += p;
  return total;
}

}  // namespace bvk
