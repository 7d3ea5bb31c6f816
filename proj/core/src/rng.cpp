#include "potts_af/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace potts_af {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t st = seed;
  for (auto& w : s_) w = splitmix64(st);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t st = index ^ 0x6a09e667f3bcc909ULL;
  std::uint64_t mixed = splitmix64(st);
  st = seed;
  return Rng(splitmix64(st) ^ mixed);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform_open() {
  for (;;) {
    double u = uniform();
    if (u > 0.0) return u;
  }
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
  // reject the low 2^64 mod n values so the remainder is unbiased
  const std::uint64_t threshold = (0 - n) % n;
  std::uint64_t r = next();
  while (r < threshold) r = next();
  return r % n;
}

double Rng::exponential() { return -std::log(uniform_open()); }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * M_PI * u2;
  spare_ = r * std::sin(ang);
  have_spare_ = true;
  return r * std::cos(ang);
}

std::int64_t Rng::poisson(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("Rng::poisson: bad mean");
  if (lambda == 0.0) return 0;
  if (lambda > 500.0) return poisson(lambda / 2) + poisson(lambda / 2);
  // inversion from the mode outward would be faster; sequential search is plenty here
  const double u = uniform();
  double p = std::exp(-lambda);
  double cdf = p;
  std::int64_t k = 0;
  while (u >= cdf) {
    ++k;
    p *= lambda / static_cast<double>(k);
    cdf += p;
    if (p == 0.0 && static_cast<double>(k) > lambda) break;
  }
  return k;
}

}  // namespace potts_af
