#include "potts_af/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace potts_af {

namespace {
std::atomic<std::size_t> g_override{0};
}

void set_worker_override(std::size_t n) { g_override.store(n); }

std::size_t worker_count() {
  if (std::size_t o = g_override.load(); o > 0) return o;
  if (const char* env = std::getenv("POTTS_AF_THREADS")) {
    try {
      long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace potts_af
