#ifndef CATLAB_PARALLEL_HPP
#define CATLAB_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace catlab {

/// Worker cap: CAT_LAB_THREADS when set, otherwise hardware parallelism.
inline int worker_count() {
  if (const char* env = std::getenv("CAT_LAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(chunk_index) for chunk_index in [0, chunks) across workers. The
// chunk layout is fixed by `chunks`, not by the worker count, so callers that
// reduce per-chunk results in index order get bitwise-identical totals no
// matter how many threads ran.
template <typename Fn>
void run_chunks(int chunks, Fn&& fn, int max_workers = worker_count()) {
  const int workers = std::max(1, std::min(max_workers, chunks));
  if (workers == 1) {
    for (int c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) fn(c);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace catlab

#endif
