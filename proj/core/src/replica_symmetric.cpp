#include "potts_af/replica_symmetric.hpp"

#include <algorithm>
#include <cmath>

#include "potts_af/analytic_bounds.hpp"
#include "potts_af/errors.hpp"
#include "potts_af/numeric.hpp"
#include "potts_af/parallel.hpp"

namespace potts_af {

namespace {

void check_t(int q, double t) {
  require(q >= 2, "q must be >= 2");
  require(t >= -1.0 / (q - 1) - 1e-15 && t <= 1.0 + 1e-15, "t must lie in [-1/(q-1), 1]");
}

}  // namespace

double g2(double beta, double c, int q, double t) {
  check_t(q, t);
  const double x = x_param(beta, q);
  const double u = x * t * t;
  const double arg = 1.0 - (q - 1) * u;
  if (arg <= 0.0) throw DomainError("g2: logarithm argument is not positive");
  return c / (2.0 * q) * ((q - 1) * std::log1p(u) + std::log1p(-(q - 1) * u));
}

G1Value g1(double beta, double c, int q, double t, double eps, double composition_budget) {
  check_t(q, t);
  require(eps > 0.0, "eps must be > 0");
  require(std::isfinite(c) && c >= 0.0, "c must be finite and >= 0");
  G1Value r;
  const double x = x_param(beta, q);
  const double A = 1.0 - x * t * (q - 1);  // factor when tau_i = s
  const double B = 1.0 + x * t;            // factor when tau_i != s
  if (c == 0.0 || x * t == 0.0) return r;
  const double log_a = std::log(A);
  const double log_b = std::log(B);
  const double m = std::max(std::abs(log_a), std::abs(log_b));
  const std::int64_t k_max = smallest_truncation(
      [&](std::int64_t k) { return m * poisson_tail_mean(k, c); }, eps, 0, 100000);
  if (k_max < 0) throw BudgetExceeded("g1: eps not reachable");
  double total = 0.0;
  for (std::int64_t k = 0; k <= k_max; ++k) total += composition_count(static_cast<int>(k), q);
  if (total > composition_budget) throw BudgetExceeded("g1: composition budget exceeded");

  std::vector<double> terms(static_cast<std::size_t>(k_max) + 1, 0.0);
  const double log_q = std::log(q);
  parallel_for(terms.size(), [&](std::size_t ki) {
    const int k = static_cast<int>(ki);
    std::vector<double> parts;
    LogSumExp inner;
    for_each_composition(k, q, [&](const std::vector<int>& n) {
      LogSumExp acc;
      for (int s = 0; s < q; ++s) {
        const double term = (n[s] == 0 ? 0.0 : n[s] * log_a) + (k - n[s] == 0 ? 0.0 : (k - n[s]) * log_b);
        acc.add(term);
      }
      const double log_weight = log_multinomial(n) - k * log_q;
      parts.push_back(std::exp(log_weight) * (acc.value() - log_q));
    });
    terms[ki] = poisson_pmf(k, c) * pairwise_sum(parts);
  });
  r.value = pairwise_sum(terms);
  r.tail = m * poisson_tail_mean(k_max, c);
  r.k_truncation = static_cast<int>(k_max);
  return r;
}

RsEvaluation rs_bound(double beta, double c, int q, double t, double eps) {
  RsEvaluation e;
  const auto one = g1(beta, c, q, t, eps);
  e.g1 = one.value;
  e.g2 = g2(beta, c, q, t);
  e.gap = e.g1 - e.g2;
  e.rs_bound = annealed_pressure(beta, c, q) + e.gap;
  e.k_truncation = one.k_truncation;
  e.tail_bound = one.tail;
  return e;
}

bool instability(double beta, double c, int q) {
  const double x = x_param(beta, q);
  return c * x * x > 1.0;
}

QuarticCoefficients quartic_coefficients(double beta, double c, int q, double eps) {
  require(eps <= 1e-10, "quartic_coefficients needs g1 eps <= 1e-10");
  const double h = 0.05;
  QuarticCoefficients out;
  const double x = x_param(beta, q);
  out.ref1 = -0.25 * (q - 1) * c * c * std::pow(x, 4);
  out.ref2 = -0.25 * (q - 1) * c * x * x;
  if (x == 0.0 || c == 0.0) return out;
  auto stencil = [h](auto&& f) {
    auto d = [&](double s) { return (f(2 * s) - 4 * f(s) + 3 * f(0.0)) / (12 * std::pow(s, 4)); };
    const double coarse = d(h);
    const double fine = d(h / 2);
    return (4 * fine - coarse) / 3;
  };
  out.a1 = stencil([&](double t) { return g1(beta, c, q, t, eps).value; });
  out.a2 = stencil([&](double t) { return g2(beta, c, q, t); });
  return out;
}

std::vector<double> rs_t_grid(int q, int points) {
  require(q >= 2, "q must be >= 2");
  require(points >= 2, "grid needs at least 2 points");
  const double lo = -1.0 / (q - 1);
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = lo + (1.0 - lo) * i / (points - 1);
  g.back() = 1.0;
  return g;
}

}  // namespace potts_af
