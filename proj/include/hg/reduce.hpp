#ifndef HG_REDUCE_HPP
#define HG_REDUCE_HPP

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace hg {

// Pairwise tree reduction in fixed index order. Deterministic for a given
// input sequence and lower rounding error than a left fold.
inline double pairwise_sum(std::span<const double> terms) {
  const std::size_t n = terms.size();
  if (n <= 16) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

// Worker count: HLS_THREADS env var; 0 or unset means auto.
inline unsigned resolve_thread_count() {
  unsigned want = 0;
  if (const char* env = std::getenv("HLS_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) want = static_cast<unsigned>(v);
  }
  if (want == 0) {
    want = std::thread::hardware_concurrency();
    if (want == 0) want = 1;
  }
  return want;
}

// Runs fn(i) for i in [0, count). Each index owns its output slot, so the
// result is independent of the partition and of the worker count.
inline void parallel_for(std::size_t count,
                         const std::function<void(std::size_t)>& fn) {
  const unsigned threads = resolve_thread_count();
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned used = static_cast<unsigned>(
      std::min<std::size_t>(threads, count));
  std::vector<std::thread> pool;
  pool.reserve(used);
  for (unsigned w = 0; w < used; ++w) {
    const std::size_t begin = count * w / used;
    const std::size_t end = count * (w + 1) / used;
    pool.emplace_back([begin, end, &fn] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace hg

#endif
