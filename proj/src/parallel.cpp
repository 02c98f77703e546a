#include "lciclv/parallel.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

namespace lciclv {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LCICLV_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int n, int threads, const std::function<void(int, int)>& block_fn) {
  if (n <= 0) return;
  if (threads > n) threads = n;
  if (threads <= 1) {
    block_fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  int base = n / threads;
  int extra = n % threads;
  int lo = 0;
  for (int t = 0; t < threads; ++t) {
    int hi = lo + base + (t < extra ? 1 : 0);
    pool.emplace_back([&block_fn, lo, hi] { block_fn(lo, hi); });
    lo = hi;
  }
  for (auto& th : pool) th.join();
}

}  // namespace lciclv
