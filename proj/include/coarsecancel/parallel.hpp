#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace ccl {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Splits [0, count) into fixed-size chunks, maps each chunk with `body`
// on a worker pool, and folds the per-chunk results in chunk order. The
// chunk grid does not depend on the thread count, so as long as `combine`
// is deterministic the reduction is bit-identical for any worker count.
template <typename R, typename Body, typename Combine>
R parallel_chunk_reduce(std::int64_t count, R init, Body body, Combine combine,
                        int threads, std::int64_t chunk = 1 << 16) {
  if (count <= 0) return init;
  std::int64_t nchunks = (count + chunk - 1) / chunk;
  std::vector<R> partial(static_cast<std::size_t>(nchunks), init);
  int nthreads = resolve_threads(threads);
  if (nthreads == 1 || nchunks == 1) {
    for (std::int64_t c = 0; c < nchunks; ++c) {
      std::int64_t lo = c * chunk, hi = std::min(count, lo + chunk);
      partial[static_cast<std::size_t>(c)] = body(lo, hi, init);
    }
  } else {
    std::atomic<std::int64_t> next{0};
    auto worker = [&]() {
      for (;;) {
        std::int64_t c = next.fetch_add(1);
        if (c >= nchunks) break;
        std::int64_t lo = c * chunk, hi = std::min(count, lo + chunk);
        partial[static_cast<std::size_t>(c)] = body(lo, hi, init);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  R acc = init;
  for (auto& p : partial) acc = combine(acc, p);
  return acc;
}

}  // namespace ccl
