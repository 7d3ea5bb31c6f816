#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "potts_af/analytic_bounds.hpp"
#include "potts_af/disorder.hpp"
#include "potts_af/numeric.hpp"
#include "potts_af/replica_symmetric.hpp"

using namespace potts_af;

namespace {

// Exact g1 by enumerating every tau sequence up to degree k_max.
double g1_enumerated(double beta, double c, int q, double t, int k_max) {
  const double x = oracle::x_of(beta, q);
  double total = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    double avg = 0.0;
    long count = 0;
    oracle::each_coloring(k, q, [&](const std::vector<int>& tau) {
      double sum = 0.0;
      for (int s = 0; s < q; ++s) {
        double prod = 1.0;
        for (int v : tau) prod *= 1.0 - x * t * (q * (v == s) - 1.0);
        sum += prod;
      }
      avg += std::log(sum / q);
      ++count;
    });
    total += oracle::poisson_pmf(k, c) * avg / count;
  }
  return total;
}

}  // namespace

TEST_CASE("g2 examples") {
  CHECK(g2(1.0, 3.0, 3, 0.0) == 0.0);
  CHECK(g2(0.0, 3.0, 3, 0.7) == 0.0);
  for (double beta : {0.4, 2.0}) {
    const double x = oracle::x_of(beta, 2);
    CHECK(g2(beta, 5.0, 2, 1.0) == doctest::Approx(1.25 * std::log(1 - x * x)).epsilon(1e-14));
  }
}

TEST_CASE("g2 is nonpositive and even") {
  for (int q : {2, 3, 4})
    for (double beta : {0.3, 1.0, kInf}) {
      for (double t : rs_t_grid(q, 41)) {
        if ((q - 1) * oracle::x_of(beta, q) * t * t >= 1.0) continue;
        const double v = g2(beta, 2.0, q, t);
        CHECK(v <= 0.0);
        if (t != 0.0) CHECK(v < 0.0);
        if (std::abs(t) <= 1.0 / (q - 1)) CHECK(v == doctest::Approx(g2(beta, 2.0, q, -t)).epsilon(1e-14));
      }
    }
}

TEST_CASE("g1 edge cases") {
  CHECK(g1(1.0, 3.0, 3, 0.0, 1e-10).value == 0.0);
  CHECK(g1(1.0, 0.0, 3, 0.5, 1e-10).value == 0.0);
}

TEST_CASE("g1 against exhaustive enumeration") {
  struct Case {
    int q;
    double beta, c, t;
    int k_max;
  };
  for (const auto& cs : {Case{2, 1.0, 1.0, 0.5, 16}, Case{2, 2.0, 0.5, -0.8, 14}, Case{3, 0.7, 0.4, 0.6, 9},
                         Case{3, 1.5, 0.4, -0.4, 9}}) {
    const auto v = g1(cs.beta, cs.c, cs.q, cs.t, 1e-12);
    CHECK(v.value == doctest::Approx(g1_enumerated(cs.beta, cs.c, cs.q, cs.t, cs.k_max)).epsilon(1e-8));
    CHECK(v.tail >= 0.0);
  }
}

TEST_CASE("g1 against a Monte Carlo oracle") {
  const auto mc = oracle::g1_monte_carlo(1.0, 1.0, 2, 0.5, 200000, 4242);
  const auto v = g1(1.0, 1.0, 2, 0.5, 1e-10);
  CHECK(std::abs(v.value - mc.mean) <= 4 * mc.se + v.tail);
}

TEST_CASE("g1 parity") {
  for (double t : rs_t_grid(2, 21)) {
    const auto a = g1(1.2, 2.0, 2, t, 1e-11), b = g1(1.2, 2.0, 2, -t, 1e-11);
    CHECK(std::abs(a.value - b.value) <= 2 * std::max(a.tail, b.tail) + 1e-12);
  }
  // q >= 3 has no color symmetry exchanging t and -t; the odd part is small but real
  for (int q : {3, 4}) {
    const auto a = g1(1.2, 2.0, q, 0.3, 1e-12), b = g1(1.2, 2.0, q, -0.3, 1e-12);
    CHECK(std::abs(a.value - b.value) > 1e-8);
    CHECK(std::abs(a.value - b.value) < 1e-4);
  }
}

TEST_CASE("rs_bound assembly") {
  const auto e = rs_bound(1.0, 3.0, 3, 0.0, 1e-10);
  CHECK(e.rs_bound == annealed_pressure(1.0, 3.0, 3));
  const auto f = rs_bound(1.0, 3.0, 3, 0.4, 1e-10);
  CHECK(f.gap == f.g1 - f.g2);
  CHECK(f.rs_bound == annealed_pressure(1.0, 3.0, 3) + f.gap);
  CHECK(f.tail_bound >= 0.0);
}

TEST_CASE("instability flag") {
  CHECK_FALSE(instability(0.0, 100.0, 3));
  CHECK_FALSE(instability(std::log(2.0), 9.0, 2));
  CHECK(instability(std::log(2.0) + 1e-6, 9.0, 2));
  CHECK_FALSE(instability(kInf, 4.0, 3));
  CHECK(instability(kInf, 4.01, 3));
}

TEST_CASE("unstable point improves on the annealed value") {
  double best = kInf, tail = 0;
  for (double t : rs_t_grid(2, 201)) {
    const auto e = rs_bound(1.0, 9.0, 2, t, 1e-10);
    best = std::min(best, e.rs_bound);
    tail = std::max(tail, e.tail_bound);
  }
  CHECK(best < annealed_pressure(1.0, 9.0, 2) - 1e-4);
}

TEST_CASE("stable points do not improve on t = 0") {
  for (const auto& [beta, c] : {std::pair{0.3, 9.0}, std::pair{0.5, 2.0}}) {
    REQUIRE(c * oracle::x_of(beta, 2) * oracle::x_of(beta, 2) < 0.9);
    for (double t : rs_t_grid(2, 101)) {
      const auto e = rs_bound(beta, c, 2, t, 1e-10);
      CHECK(e.rs_bound >= annealed_pressure(beta, c, 2) - e.tail_bound - 1e-12);
    }
  }
}

TEST_CASE("rs bound dominates small exact quenched pressures") {
  for (double c : {1.0, 4.0}) {
    const ModelParams p{2, 1.0, c};
    const auto pn = quenched_pressure_exact(p, 4, 1e-7);
    for (double t : rs_t_grid(2, 21)) {
      const auto e = rs_bound(1.0, c, 2, t, 1e-10);
      CHECK(e.rs_bound + e.tail_bound >= pn.value - pn.error());
    }
  }
}

TEST_CASE("quartic coefficients") {
  const auto z = quartic_coefficients(0.0, 4.0, 2);
  CHECK(z.a1 == 0.0);
  CHECK(z.a2 == 0.0);
  CHECK(z.ref1 == 0.0);
  CHECK(z.ref2 == 0.0);
  for (const auto& [q, c, beta] : {std::tuple{2, 4.0, 1.0}, std::tuple{3, 10.0, 2.0}}) {
    const auto r = quartic_coefficients(beta, c, q);
    const double x = oracle::x_of(beta, q);
    CHECK(r.ref1 == doctest::Approx(-0.25 * (q - 1) * c * c * std::pow(x, 4)));
    CHECK(r.ref2 == doctest::Approx(-0.25 * (q - 1) * c * x * x));
    CHECK(std::abs(r.a1 - r.ref1) <= 0.01 * std::abs(r.ref1));
    CHECK(std::abs(r.a2 - r.ref2) <= 0.01 * std::abs(r.ref2));
  }
}

TEST_CASE("t = 0 reproduces the one-level decomposition") {
  // G1 = ln q + c ln(1 - a/q) + g1, G2 = (c/2) ln(1 - a/q) + g2 with g1 = g2 = 0 at t = 0
  for (int q : {2, 3}) {
    const double a = 1 - std::exp(-1.3);
    const double G1 = std::log(q) + 2.5 * std::log(1 - a / q) + g1(1.3, 2.5, q, 0.0, 1e-12).value;
    const double G2 = 1.25 * std::log(1 - a / q) + g2(1.3, 2.5, q, 0.0);
    CHECK(std::abs(G1 - G2 - oracle::annealed(1.3, 2.5, q)) <= 1e-12);
  }
}

TEST_CASE("t grid") {
  const auto g = rs_t_grid(3, 201);
  CHECK(g.size() == 201);
  CHECK(g.front() == -0.5);
  CHECK(g.back() == 1.0);
}
