#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace elliptope {

// Runs fn(k) for k in [0, n). Work items must be independent; results must
// not depend on the schedule. threads <= 0 means hardware concurrency.
template <typename Fn>
void parallel_for(long long n, int threads, Fn&& fn) {
  if (n <= 0) return;
  int t = threads > 0 ? threads : int(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  if (t > n) t = int(n);
  if (t == 1) {
    for (long long k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<long long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(t));
  for (int w = 0; w < t; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const long long k = next.fetch_add(1);
        if (k >= n) return;
        fn(k);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace elliptope
