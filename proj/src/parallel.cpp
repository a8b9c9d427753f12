#include "helmbem/parallel.hpp"

#include <atomic>

namespace helmbem {

namespace {
std::atomic<int> g_workers{0}; // 0 = use hardware concurrency
}

int worker_count() {
  const int w = g_workers.load(std::memory_order_relaxed);
  if (w > 0) return w;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

void set_worker_count(int n) { g_workers.store(n, std::memory_order_relaxed); }

} // namespace helmbem
