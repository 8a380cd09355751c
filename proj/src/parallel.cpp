#include "weakflow/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace weakflow {

int parallelism_width() {
  static const int width = [] {
    if (const char* env = std::getenv("WEAKFLOW_THREADS")) {
      const int n = std::atoi(env);
      if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }();
  return width;
}

void parallel_for(long n, const std::function<void(long)>& body) {
  const int width = parallelism_width();
  if (width <= 1 || n < 2 * width) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  const long chunk = std::max<long>(1, n / (8 * width));
  auto worker = [&] {
    for (;;) {
      const long begin = next.fetch_add(chunk);
      if (begin >= n) return;
      const long end = std::min(n, begin + chunk);
      for (long i = begin; i < end; ++i) body(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(width - 1);
  for (int t = 0; t < width - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace weakflow
