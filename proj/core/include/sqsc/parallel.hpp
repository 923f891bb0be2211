#pragma once
//
// Deterministic block-parallel execution.
//
// Work is always split into a *fixed* block decomposition that does not depend
// on the number of threads; threads only pick up blocks. Any reduction is then
// performed sequentially in block order, so results are bit-stable across
// thread counts.
//

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace sqsc {

/// Resolve a thread count: explicit request > SQSC_THREADS env > hardware.
inline int resolve_threads(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SQSC_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Run fn(block_index) for block_index in [0, num_blocks) on `threads`
/// threads. Blocks are claimed via an atomic counter; each block must write
/// only to its own outputs.
inline void parallel_for_blocks(std::int64_t num_blocks, int threads,
                                const std::function<void(std::int64_t)>& fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || num_blocks <= 1) {
    for (std::int64_t b = 0; b < num_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::int64_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= num_blocks) return;
      fn(b);
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = static_cast<int>(std::min<std::int64_t>(threads, num_blocks));
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

/// Fixed-size range blocking: [0,n) into blocks of `block` (last one ragged).
struct RangeBlocks {
  std::int64_t n, block;
  std::int64_t count() const { return n <= 0 ? 0 : (n + block - 1) / block; }
  std::int64_t begin(std::int64_t b) const { return b * block; }
  std::int64_t end(std::int64_t b) const {
    const std::int64_t e = (b + 1) * block;
    return e < n ? e : n;
  }
};

}  // namespace sqsc
