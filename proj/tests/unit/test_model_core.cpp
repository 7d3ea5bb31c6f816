#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "potts_af/errors.hpp"
#include "potts_af/model_core.hpp"
#include "potts_af/numeric.hpp"

using namespace potts_af;

namespace {

oracle::Matrix random_rows(int n, int max_entry, std::mt19937_64& gen) {
  std::uniform_int_distribution<int> d(0, max_entry);
  oracle::Matrix rows(n, std::vector<int>(n));
  for (auto& r : rows)
    for (auto& v : r) v = d(gen);
  return rows;
}

}  // namespace

TEST_CASE("hamiltonian examples") {
  CouplingMatrix zero(3);
  CHECK(hamiltonian({0, 1, 0}, zero) == 0);
  CHECK(hamiltonian({0}, CouplingMatrix(oracle::Matrix{{2}})) == 2);
  CouplingMatrix j(oracle::Matrix{{0, 1}, {0, 0}});
  CHECK(hamiltonian({0, 0}, j) == 1);
  CHECK(hamiltonian({0, 1}, j) == 0);
  CHECK_THROWS(hamiltonian({0, 0, 0}, j));
}

TEST_CASE("coupling matrix rejects bad input") {
  CHECK_THROWS(CouplingMatrix(oracle::Matrix{{0, 1}, {0}}));
  CHECK_THROWS(CouplingMatrix(oracle::Matrix{{-1}}));
  CouplingMatrix j(2);
  CHECK_THROWS(j.set(0, 0, -2));
}

TEST_CASE("log_partition examples") {
  CHECK(log_partition(CouplingMatrix(oracle::Matrix{{1, 2}, {0, 3}}), 3, 0.0) == doctest::Approx(2 * std::log(3.0)).epsilon(1e-15));
  for (int k : {0, 1, 4})
    CHECK(log_partition(CouplingMatrix(oracle::Matrix{{k}}), 3, 0.7) == doctest::Approx(std::log(3.0) - 0.7 * k).epsilon(1e-14));
  CHECK(log_partition(CouplingMatrix(oracle::Matrix{{0, 1}, {0, 0}}), 2, std::log(2.0)) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
}

TEST_CASE("log_partition agrees with brute force") {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const int q = 2 + trial % 3;
    const int n = q == 2 ? 6 : (q == 3 ? 4 : 3);
    const auto rows = random_rows(n, 2, gen);
    const double beta = 0.1 + 0.2 * trial;
    CHECK(log_partition(CouplingMatrix(rows), q, beta) == doctest::Approx(oracle::log_z(rows, q, beta)).epsilon(1e-12));
    CHECK(entropy_density(CouplingMatrix(rows), q, beta) ==
          doctest::Approx(oracle::entropy(rows, q, beta)).epsilon(1e-10));
  }
}

TEST_CASE("large beta does not underflow") {
  CouplingMatrix j(oracle::Matrix{{0, 3, 1}, {0, 0, 2}, {1, 0, 0}});
  const double v = log_partition(j, 2, 50.0);
  CHECK(std::isfinite(v));
  // ground energy 2, attained by 4 of the 8 colorings
  CHECK(v == doctest::Approx(std::log(4.0) - 100.0).epsilon(1e-12));
}

TEST_CASE("enumeration budget is enforced") {
  CHECK_THROWS_AS(log_partition(CouplingMatrix(15), 2, 1.0), BudgetExceeded);
  CHECK_NOTHROW(log_partition(CouplingMatrix(15), 2, 1.0, 1u << 15));
  CHECK_THROWS_AS(log_partition(CouplingMatrix(2), 2, -1.0), DomainError);
  CHECK_THROWS_AS(log_partition(CouplingMatrix(2), 2, kInf), DomainError);
}

TEST_CASE("pressure_density examples") {
  CHECK(pressure_density(CouplingMatrix(oracle::Matrix{{0, 2}, {1, 0}}), 4, 0.0) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(pressure_density(CouplingMatrix(3), 3, 2.0) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
  CHECK(pressure_density(CouplingMatrix(oracle::Matrix{{1}}), 2, 1.0) == doctest::Approx(std::log(2.0) - 1.0).epsilon(1e-15));
}

TEST_CASE("entropy_density examples") {
  CHECK(entropy_density(CouplingMatrix(oracle::Matrix{{0, 1}, {1, 0}}), 3, 0.0) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  for (double beta : {0.3, 2.0, kInf})
    CHECK(entropy_density(CouplingMatrix(oracle::Matrix{{5}}), 3, beta) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  // A path on 3 vertices has q (q-1)^2 proper colorings.
  CouplingMatrix path(oracle::Matrix{{0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
  CHECK(entropy_density(path, 3, kInf) == doctest::Approx(std::log(12.0) / 3).epsilon(1e-14));
  CHECK(entropy_density(path, 3, 40.0) == doctest::Approx(std::log(12.0) / 3).epsilon(1e-9));
}

TEST_CASE("empirical_measure") {
  CHECK(empirical_measure({{0, 0, 0}}, std::vector<int>{0}) == 1.0);
  CHECK(empirical_measure({{0, 0, 0}}, std::vector<int>{1}) == 0.0);
  CHECK(empirical_measure({{0, 1}}, std::vector<int>{0}) == 0.5);
  CHECK(empirical_measure({{0, 1}}, std::vector<int>{1}) == 0.5);
  const ReplicaBundle same{{0, 1, 2, 1}, {0, 1, 2, 1}};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) CHECK(empirical_measure(same, std::vector<int>{a, b}) == 0.0);
  CHECK_THROWS(empirical_measure(same, std::vector<int>{0}));
}

TEST_CASE("empirical_measure sums to one") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int q = 2 + trial % 3, r = 1 + trial % 3, n = 3 + trial;
    std::uniform_int_distribution<int> d(0, q - 1);
    ReplicaBundle b(r, SpinConfig(n));
    for (auto& s : b)
      for (auto& v : s) v = d(gen);
    double total = 0.0;
    oracle::each_coloring(r, q, [&](const std::vector<int>& s) { total += empirical_measure(b, s); });
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("gibbs_replica_expectation examples") {
  CouplingMatrix j(oracle::Matrix{{0, 1, 0}, {0, 1, 1}, {2, 0, 0}});
  CHECK(gibbs_replica_expectation(j, 2, 0.8, 2, [](const ReplicaBundle&) { return 1.0; }) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gibbs_replica_expectation(CouplingMatrix(3), 3, 0.0, 1,
                                  [](const ReplicaBundle& b) { return b[0][0] == b[0][2] ? 1.0 : 0.0; }) ==
        doctest::Approx(1.0 / 3).epsilon(1e-14));
  const auto agree = [](const ReplicaBundle& b) {
    double s = 0;
    for (int c = 0; c < 4; ++c) s += empirical_measure(b, std::vector<int>{c, c});
    return s;
  };
  CHECK(gibbs_replica_expectation(CouplingMatrix(1), 4, 0.0, 2, agree) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("two-point function agrees with replica expectation") {
  CouplingMatrix j(oracle::Matrix{{0, 1, 0}, {0, 0, 2}, {1, 0, 0}});
  const auto tp = two_point_function(j, 3, 0.9);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      const double ref = gibbs_replica_expectation(
          j, 3, 0.9, 1, [i, k](const ReplicaBundle& b) { return b[0][i] == b[0][k] ? 1.0 : 0.0; });
      CHECK(tp[i * 3 + k] == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("entropy is nonnegative on a random grid") {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int q = 2 + trial % 2;
    const auto rows = random_rows(4, 3, gen);
    for (double beta : {0.0, 0.5, 3.0, 20.0, kInf}) CHECK(entropy_density(CouplingMatrix(rows), q, beta) >= -1e-12);
  }
}

TEST_CASE("entropy equals p - beta dp/dbeta") {
  std::mt19937_64 gen(31);
  const double h = 1e-5;
  for (int trial = 0; trial < 10; ++trial) {
    const int q = 2 + trial % 2;
    CouplingMatrix j(random_rows(4, 2, gen));
    for (double beta : {0.2, 1.0, 2.5}) {
      const double d = (pressure_density(j, q, beta + h) - pressure_density(j, q, beta - h)) / (2 * h);
      const double s = entropy_density(j, q, beta);
      const double ident = pressure_density(j, q, beta) - beta * d;
      CHECK(std::abs(s - ident) <= 1e-6 * std::max(1.0, std::abs(s)));
    }
  }
}

TEST_CASE("pressure is convex in beta") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 10; ++trial) {
    CouplingMatrix j(random_rows(5, 2, gen));
    const double h = 0.05;
    for (int i = 1; i < 80; ++i) {
      const double b = i * h;
      const double second = pressure_density(j, 2, b + h) - 2 * pressure_density(j, 2, b) + pressure_density(j, 2, b - h);
      CHECK(second >= -1e-9);
    }
  }
}

TEST_CASE("color relabeling leaves ln Z unchanged") {
  // Relabeling is a bijection on configurations; check via histogram equality under a permuted enumeration.
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 5; ++trial) {
    CouplingMatrix j(random_rows(4, 2, gen));
    const auto hist = energy_histogram(j, 3);
    std::vector<double> permuted(hist.size(), 0.0);
    const int perm[3] = {2, 0, 1};
    for_each_config(4, 3, kDefaultEnumerationBudget, [&](const SpinConfig& s) {
      SpinConfig t(s);
      for (auto& v : t) v = perm[v];
      permuted[hamiltonian(t, j)] += 1.0;
    });
    CHECK(hist == permuted);
  }
}

TEST_CASE("incremental energies match direct evaluation") {
  std::mt19937_64 gen(99);
  CouplingMatrix j(random_rows(5, 3, gen));
  std::size_t visited = 0;
  for_each_config_energy(j, 3, kDefaultEnumerationBudget, [&](const SpinConfig& s, std::int64_t e) {
    CHECK(e == hamiltonian(s, j));
    ++visited;
  });
  CHECK(visited == 243);
  CHECK(config_count(3, 5) == 243);
  CHECK(config_count(2, 70) == UINT64_MAX);
}

TEST_CASE("model params validation") {
  CHECK_THROWS_AS((ModelParams{1, 1.0, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((ModelParams{2, -1.0, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((ModelParams{2, 1.0, -1.0}.validate()), DomainError);
  CHECK_THROWS_AS((ModelParams{2, kInf, 1.0}.validate()), DomainError);
  CHECK_NOTHROW((ModelParams{2, kInf, 1.0}.validate(true)));
}
