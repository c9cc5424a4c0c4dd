#ifndef IMITATION_SRC_PARALLEL_HPP
#define IMITATION_SRC_PARALLEL_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace imitation::detail {

inline int default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Splits [0, total) into contiguous chunks and runs fn(chunk_index, begin,
// end) on a small thread pool. Chunk boundaries depend only on total and
// workers, so per-chunk results can be merged deterministically by index.
inline void parallel_chunks(
    std::int64_t total, int workers,
    const std::function<void(int, std::int64_t, std::int64_t)>& fn) {
  workers = std::max(1, workers);
  const int chunks = static_cast<int>(
      std::min<std::int64_t>(static_cast<std::int64_t>(workers) * 4,
                             std::max<std::int64_t>(1, total)));
  std::vector<std::int64_t> bounds(chunks + 1);
  for (int c = 0; c <= chunks; ++c) {
    bounds[c] = total * c / chunks;
  }
  if (workers == 1 || total < 2) {
    for (int c = 0; c < chunks; ++c) fn(c, bounds[c], bounds[c + 1]);
    return;
  }
  std::mutex mu;
  int next = 0;
  auto worker = [&] {
    for (;;) {
      int c;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= chunks) return;
        c = next++;
      }
      fn(c, bounds[c], bounds[c + 1]);
    }
  };
  const int n_threads = std::min(workers, chunks);
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace imitation::detail

#endif
