#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace qdisc {

// Worker count: QDISC_THREADS overrides hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("QDISC_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Runs fn(begin, end) over a partition of [0, n).  Chunks are contiguous so
// callers can write results into preallocated slots and merge
// deterministically afterwards.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  unsigned workers = worker_count();
  if (n == 0) return;
  if (workers <= 1 || n < 256) {
    fn(std::size_t{0}, n);
    return;
  }
  if (workers > n) workers = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    if (lo >= n) break;
    std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace qdisc
