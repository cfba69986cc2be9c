#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sticky {

//! Runs fn(i) for i in [0, n) on up to `threads` workers pulling indices from a
//! shared counter. Each index must write only its own output slot, which
//! keeps results independent of the thread count.
inline void parallel_for(long n, int threads, const std::function<void(long)>& fn)
{
  threads = std::max(1, std::min<int>(threads, static_cast<int>(std::max<long>(n, 1))));
  if (threads == 1) {
    for (long i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto worker = [&] {
    for (long i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!err)
          err = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back(worker);
  for (auto& t : pool)
    t.join();
  if (err)
    std::rethrow_exception(err);
}

} // namespace sticky
