#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fbmbt {

/// Calls fn(i) for i in [0, count) on up to `threads` workers. Work is
/// handed out one index at a time; callers write results into slot i, so the
/// outcome does not depend on the worker count. The first exception thrown
/// by any call is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::jthread> pool;
  pool.reserve(n);
  for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

/// Worker count used when the caller asks for 0 ("all cores").
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace fbmbt
