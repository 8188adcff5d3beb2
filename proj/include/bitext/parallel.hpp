#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace bitext {

/// Upper bound on worker threads. Results never depend on this value.
struct Parallelism {
  unsigned threads = 1;
};

/// Calls fn(i) for every i in [0, n), split into contiguous static chunks.
/// fn must only write to per-index state. If several chunks throw, the
/// exception from the lowest chunk is rethrown.
template <class Fn>
void parallel_for(std::size_t n, Parallelism par, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(par.threads, 1, std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace bitext
