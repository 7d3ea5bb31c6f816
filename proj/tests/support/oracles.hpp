#pragma once

// Independent reference computations for the tests. Nothing here calls into the library:
// every value is recomputed from the definitions by direct enumeration, quadrature or sampling.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<int>>;

inline double annealed(double beta, double c, int q) {
  const double a = std::isinf(beta) ? 1.0 : 1.0 - std::exp(-beta);
  return std::log(static_cast<double>(q)) + 0.5 * c * std::log(1.0 - a / q);
}

inline double x_of(double beta, int q) {
  const double e = std::isinf(beta) ? 0.0 : std::exp(-beta);
  return (1.0 - e) / (q - 1 + e);
}

// Calls fn(sigma) for all q^n colorings, last site fastest.
inline void each_coloring(int n, int q, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> s(static_cast<std::size_t>(n), 0);
  while (true) {
    fn(s);
    int i = n - 1;
    while (i >= 0 && ++s[i] == q) s[i--] = 0;
    if (i < 0) return;
  }
}

inline long energy(const std::vector<int>& s, const Matrix& J) {
  long e = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (s[i] == s[j]) e += J[i][j];
  return e;
}

// Plain sum of Boltzmann weights; fine for the small energies used in tests.
inline double log_z(const Matrix& J, int q, double beta) {
  double z = 0.0;
  each_coloring(static_cast<int>(J.size()), q, [&](const std::vector<int>& s) { z += std::exp(-beta * energy(s, J)); });
  return std::log(z);
}

inline double log_z_balanced(const Matrix& J, int q, double beta) {
  const int n = static_cast<int>(J.size());
  double z = 0.0;
  each_coloring(n, q, [&](const std::vector<int>& s) {
    std::vector<int> cnt(static_cast<std::size_t>(q), 0);
    for (int v : s) ++cnt[v];
    for (int v : cnt)
      if (v * q != n) return;
    const long e = energy(s, J);
    if (std::isinf(beta)) {
      if (e == 0) z += 1.0;
    } else {
      z += std::exp(-beta * e);
    }
  });
  return std::log(z);
}

inline double entropy(const Matrix& J, int q, double beta) {
  const int n = static_cast<int>(J.size());
  std::vector<double> w;
  each_coloring(n, q, [&](const std::vector<int>& s) { w.push_back(std::exp(-beta * energy(s, J))); });
  double z = 0.0;
  for (double v : w) z += v;
  double h = 0.0;
  for (double v : w)
    if (v > 0.0) h -= (v / z) * std::log(v / z);
  return h / n;
}

// Visits every ordered list of k pairs in {0..n-1}^2.
inline void each_placement(int n, int k, const std::function<void(const Matrix&)>& fn) {
  const int cells = n * n;
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  while (true) {
    Matrix J(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    for (int e : idx) ++J[e / n][e % n];
    fn(J);
    int i = k - 1;
    while (i >= 0 && ++idx[i] == cells) idx[i--] = 0;
    if (i < 0) return;
  }
}

// E[ln Z | K = k] / n by exhaustive placement average.
inline double conditional_pressure(int n, int q, double beta, int k) {
  double sum = 0.0;
  long count = 0;
  each_placement(n, k, [&](const Matrix& J) {
    sum += log_z(J, q, beta);
    ++count;
  });
  return sum / count / n;
}

inline double poisson_pmf(int k, double lambda) {
  return std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
}

// Composite Simpson on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// int_0^inf x^-s e^-x dx for s in [0, 1): substituting x = y^(1/(1-s)) removes the endpoint singularity.
inline double gamma_integral(double s) {
  const double p = 1.0 / (1.0 - s);
  const auto f = [p](double y) { return p * std::exp(-std::pow(y, p)); };
  return simpson(f, 0.0, std::pow(60.0, 1.0 / p), 200000);
}

// Monte Carlo estimate of the replica-symmetric g1 straight from its definition:
// k ~ Poisson(c), tau_i uniform, average ln(q^-1 sum_s prod_i (1 - x t (q delta(tau_i, s) - 1))).
struct McValue {
  double mean;
  double se;
};

inline McValue g1_monte_carlo(double beta, double c, int q, double t, int samples, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::poisson_distribution<int> kd(c);
  std::uniform_int_distribution<int> td(0, q - 1);
  const double x = x_of(beta, q);
  double s1 = 0.0, s2 = 0.0;
  for (int n = 0; n < samples; ++n) {
    const int k = kd(gen);
    std::vector<int> tau(static_cast<std::size_t>(k));
    for (int& v : tau) v = td(gen);
    double sum = 0.0;
    for (int s = 0; s < q; ++s) {
      double prod = 1.0;
      for (int v : tau) prod *= 1.0 - x * t * (q * (v == s ? 1.0 : 0.0) - 1.0);
      sum += prod;
    }
    const double val = std::log(sum / q);
    s1 += val;
    s2 += val * val;
  }
  const double mean = s1 / samples;
  return {mean, std::sqrt(std::max(0.0, s2 / samples - mean * mean) / (samples - 1))};
}

}  // namespace oracle
