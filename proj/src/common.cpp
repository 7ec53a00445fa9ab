#include "torus_mreg/common.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace torus_mreg {

namespace {
std::atomic<int> g_threads{1};
}

int default_thread_count() { return g_threads.load(); }

void set_default_thread_count(int threads) {
  g_threads.store(std::max(1, threads));
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int threads) {
  if (threads <= 0) threads = default_thread_count();
  const std::size_t nt = std::min<std::size_t>(std::max(threads, 1), n);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  std::atomic<std::size_t> next{0};
  for (std::size_t t = 0; t < nt; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

}  // namespace torus_mreg
