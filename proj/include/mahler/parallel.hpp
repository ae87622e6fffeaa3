#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace mahler {

inline unsigned worker_count(unsigned requested = 0) {
  if (requested) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// Runs body(begin, end, chunk) over [0, n) split into contiguous chunks, one
/// per worker. The split depends only on n and the worker count; callers that
/// need schedule-independent results reduce per-chunk outputs in chunk order.
template <class Body>
void parallel_for(std::size_t n, Body body, unsigned threads = 0) {
  const std::size_t workers = std::min<std::size_t>(worker_count(threads), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    body(std::size_t{0}, n, std::size_t{0});
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers, end = n * (w + 1) / workers;
    pool.emplace_back([=, &body] { body(begin, end, w); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace mahler
