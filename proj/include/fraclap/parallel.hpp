#pragma once
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fraclap {

// Process-wide switch; --sequential turns worker threads off.
void set_sequential(bool on);
bool sequential();
unsigned worker_count();

// Calls f(i) for i in [0, n). Each index is written by exactly one worker, so
// results do not depend on scheduling.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  unsigned nw = sequential() ? 1u : std::min<unsigned>(worker_count(), static_cast<unsigned>(n));
  if (nw <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!err) err = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nw; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace fraclap
