#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace zeroclass {

// Worker count policy: the ZEROCLASS_THREADS environment variable, where 0 or
// unset means "pick automatically".  Results of parallel_map are collected by
// index, so outputs never depend on the worker count.
inline unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("ZEROCLASS_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return hw;
}

template <typename T, typename F>
std::vector<T> parallel_map(size_t count, F&& f) {
  std::vector<T> out(count);
  unsigned workers = std::min<size_t>(worker_count(), count);
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= count) return;
        out[i] = f(i);
      }
    });
  for (std::thread& t : pool) t.join();
  return out;
}

} // namespace zeroclass
