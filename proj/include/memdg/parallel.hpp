#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace memdg {

/// Static-chunked parallel loop over [begin, end). Each index is processed
/// exactly once; the caller's body must only write to its own output slot so
/// that the result is independent of the thread count.
template <typename Body>
void parallel_for(int begin, int end, int n_threads, const Body& body) {
  const int n = end - begin;
  if (n <= 0) return;
  n_threads = std::max(1, std::min(n_threads, n));
  if (n_threads == 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  const int chunk = (n + n_threads - 1) / n_threads;
  for (int t = 0; t < n_threads; ++t) {
    const int lo = begin + t * chunk;
    const int hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (int i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace memdg
