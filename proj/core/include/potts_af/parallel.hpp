#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace potts_af {

// Worker count: in-process override if set, else POTTS_AF_THREADS, else hardware concurrency.
std::size_t worker_count();
void set_worker_override(std::size_t n);  // 0 clears the override

// Runs f(i) for i in [0, n). Each index must write only its own output slot, so the
// result never depends on how indices are spread across threads.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) f(i);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

// Fixed-shape pairwise summation.
double pairwise_sum(std::span<const double> xs);

}  // namespace potts_af
