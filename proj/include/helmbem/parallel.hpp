#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace helmbem {

/// Process-wide worker count used by assembly loops and sweeps.
int worker_count();
void set_worker_count(int n);

/// Static contiguous partition of [0, n) over the workers. Every index is
/// handled exactly once and writes are expected to be disjoint, so results
/// are identical for any worker count.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  const int workers = std::min(worker_count(), n > 0 ? n : 1);
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    const int begin = static_cast<int>((static_cast<long long>(n) * t) / workers);
    const int end = static_cast<int>((static_cast<long long>(n) * (t + 1)) / workers);
    threads.emplace_back([&fn, begin, end] {
      for (int i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& th : threads) th.join();
}

} // namespace helmbem
