#include "krf/parallel.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

namespace krf {

int worker_count() {
  const char* env = std::getenv("WORKERS");
  if (!env) return 1;
  int w = std::atoi(env);
  if (w < 1) w = 1;
  if (w > 64) w = 64;
  return w;
}

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
  const int workers = worker_count();
  if (workers <= 1 || n < 64) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const size_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const size_t lo = w * chunk;
    const size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace krf
