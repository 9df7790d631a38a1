#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace hdperm {

namespace detail {
inline thread_local int parallel_depth = 0;
}

inline unsigned worker_count() {
  if (const char* env = std::getenv("HDPERM_THREADS")) {
    long v = std::atol(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? hc : 1;
}

/// Static-partition parallel loop over [0, count). Each index is independent
/// work writing to its own output slot, so results do not depend on the worker
/// count. Nested calls run serially to avoid oversubscription.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  unsigned workers = worker_count();
  if (workers <= 1 || count <= 1 || detail::parallel_depth > 0) {
    detail::parallel_depth++;
    for (std::size_t i = 0; i < count; ++i) body(i);
    detail::parallel_depth--;
    return;
  }
  if (workers > count) workers = static_cast<unsigned>(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      detail::parallel_depth++;
      try {
        for (std::size_t i = t; i < count; i += workers) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
      detail::parallel_depth--;
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

} // namespace hdperm
