#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace levy {

// Runs body(i) for i in [0, n) on up to hardware_concurrency threads.
// Each index must write only its own output slot. The first exception
// thrown by any worker is rethrown on the calling thread.
template <typename Body>
void parallel_for(std::ptrdiff_t n, Body&& body) {
  const std::ptrdiff_t workers =
      std::min<std::ptrdiff_t>(std::max(1u, std::thread::hardware_concurrency()), n);
  if (workers <= 1) {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::ptrdiff_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::ptrdiff_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace levy
