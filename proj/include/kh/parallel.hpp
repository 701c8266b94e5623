#pragma once

// Deterministic data-parallel reductions. KH_THREADS caps the worker count.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace kh {

/// Worker count: KH_THREADS if set and positive, else hardware concurrency.
int thread_count();

/// max over i in [0, n) of f(i), or `init` when n = 0. f must be re-entrant.
/// The max is order independent, so the result does not depend on the
/// thread count. The first exception thrown by any worker is rethrown.
template <class F>
double parallel_max(std::size_t n, F&& f, double init = 0.0) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(thread_count(), n / 256 + 1));
  if (workers == 1) {
    double m = init;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, f(i));
    return m;
  }
  std::vector<double> partial(workers, init);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) partial[w] = std::max(partial[w], f(i));
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return *std::max_element(partial.begin(), partial.end());
}

}  // namespace kh
