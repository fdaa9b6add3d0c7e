#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hdgmm {

/// Number of worker threads: explicit request, else HDGMM_THREADS env var,
/// else hardware concurrency.
unsigned resolve_threads(unsigned requested);

/// Runs fn(i) for i in [0, count) across `threads` workers. Work items are
/// handed out by an atomic counter; the first exception is rethrown after
/// all workers join. fn must not depend on execution order.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (count == 0) return;
  if (threads <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n_workers = std::min<std::size_t>(threads, count);
  pool.reserve(n_workers);
  for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace hdgmm
