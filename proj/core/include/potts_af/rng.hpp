#pragma once

#include <array>
#include <cstdint>

namespace potts_af {

std::uint64_t splitmix64(std::uint64_t& state);

// xoshiro256** with hand-written distribution transforms, so that a given seed
// produces the same stream on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent stream for work item `index` derived from a base seed.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next();
  double uniform();           // [0, 1)
  double uniform_open();      // (0, 1)
  std::uint64_t below(std::uint64_t n);  // uniform on {0, ..., n-1}
  double exponential();       // rate 1
  double normal();
  std::int64_t poisson(double lambda);

 private:
  std::array<std::uint64_t, 4> s_{};
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace potts_af
