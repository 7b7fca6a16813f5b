#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace spinbound {

// Worker cap: SPINBOUND_THREADS env var, else hardware concurrency.
inline int default_thread_count() {
  if (const char* env = std::getenv("SPINBOUND_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Fork-join over [0, n). Each index runs exactly once; workers own disjoint
// strided index sets and communicate only through per-index results the
// caller aggregates afterwards, so the outcome is independent of scheduling.
inline void parallel_for(long n, int threads,
                         const std::function<void(long)>& body) {
  threads = static_cast<int>(std::max<long>(1, std::min<long>(threads, n)));
  if (threads == 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([=, &body]() {
      for (long i = t; i < n; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace spinbound
