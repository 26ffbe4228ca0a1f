// Deterministic work partitioning: chunks are indexed, workers pull chunk
// indices, the caller combines per-chunk results in fixed index order, so
// parallel and serial execution produce identical reductions.
#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace rmobo {

inline void parallel_chunks(int n_chunks, int n_threads,
                            const std::function<void(int)>& fn) {
  if (n_threads <= 1 || n_chunks <= 1) {
    for (int c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= n_chunks) return;
      fn(c);
    }
  };
  std::vector<std::thread> pool;
  const int k = std::min(n_threads, n_chunks);
  pool.reserve(k);
  for (int t = 0; t < k; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace rmobo
