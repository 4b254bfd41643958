#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace nonlocal::detail {

/// Worker count: explicit request, else NONLOCAL_BVP_THREADS, else hardware
/// concurrency. 0 means auto at every level.
inline std::size_t resolve_threads(std::size_t requested, std::size_t job_count) {
  std::size_t n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("NONLOCAL_BVP_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v > 0) n = static_cast<std::size_t>(v);
    }
  }
  if (n == 0) n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  return std::min(n, std::max<std::size_t>(job_count, 1));
}

/// Runs fn(i) for i in [0, count) on `threads` workers. Results must be
/// written to pre-sized per-index storage so aggregation stays deterministic
/// regardless of scheduling.
inline void parallel_for(std::size_t count, std::size_t threads,
                         const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (threads <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace nonlocal::detail
