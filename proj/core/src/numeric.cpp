#include "potts_af/numeric.hpp"

#include <algorithm>
#include <stdexcept>

#include "potts_af/parallel.hpp"

namespace potts_af {

double log_sum_exp(std::span<const double> xs) {
  LogSumExp acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

Quadrature gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) {
        // refresh derivative at the converged node
        p0 = 1.0;
        p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        break;
      }
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    q.nodes[i] = mid - half * z;
    q.nodes[n - 1 - i] = mid + half * z;
    q.weights[i] = q.weights[n - 1 - i] = half * w;
  }
  return q;
}

double log_factorial(std::int64_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double poisson_log_pmf(std::int64_t k, double lambda) {
  if (k < 0) return -kInf;
  if (lambda == 0.0) return k == 0 ? 0.0 : -kInf;
  return static_cast<double>(k) * std::log(lambda) - lambda - log_factorial(k);
}

double poisson_pmf(std::int64_t k, double lambda) { return std::exp(poisson_log_pmf(k, lambda)); }

double poisson_sf(std::int64_t k, double lambda) {
  if (k < 0) return 1.0;
  if (lambda == 0.0) return 0.0;
  if (static_cast<double>(k) + 1.0 < lambda) {
    double cdf = 0.0;
    for (std::int64_t j = 0; j <= k; ++j) cdf += poisson_pmf(j, lambda);
    return std::max(0.0, 1.0 - cdf);
  }
  // terms decrease geometrically beyond the mean
  double term = poisson_pmf(k + 1, lambda);
  double sum = 0.0;
  for (std::int64_t j = k + 1; term > 0.0; ++j) {
    sum += term;
    if (term < sum * 1e-18) break;
    term *= lambda / static_cast<double>(j + 1);
  }
  return std::min(1.0, sum);
}

double poisson_tail_mean(std::int64_t k, double lambda) { return lambda * poisson_sf(k - 1, lambda); }

std::int64_t smallest_truncation(const std::function<double(std::int64_t)>& bound, double eps,
                                 std::int64_t start, std::int64_t limit) {
  for (std::int64_t k = start; k <= limit; ++k)
    if (bound(k) <= eps) return k;
  return -1;
}

double log_multinomial(std::span<const int> counts) {
  std::int64_t total = 0;
  double r = 0.0;
  for (int c : counts) {
    total += c;
    r -= log_factorial(c);
  }
  return r + log_factorial(total);
}

double composition_count(int total, int parts) {
  // C(total + parts - 1, parts - 1)
  return std::round(std::exp(log_factorial(total + parts - 1) - log_factorial(parts - 1) - log_factorial(total)));
}

void for_each_composition(int total, int parts, const std::function<void(const std::vector<int>&)>& fn) {
  if (parts < 1) throw std::invalid_argument("for_each_composition: parts must be >= 1");
  std::vector<int> c(parts, 0);
  std::function<void(int, int)> rec = [&](int idx, int left) {
    if (idx == parts - 1) {
      c[idx] = left;
      fn(c);
      return;
    }
    for (int v = left; v >= 0; --v) {
      c[idx] = v;
      rec(idx + 1, left - v);
    }
  };
  rec(0, total);
}

MeanError mean_and_error(std::span<const double> xs) {
  MeanError r;
  const auto n = static_cast<double>(xs.size());
  if (xs.empty()) return r;
  r.mean = pairwise_sum(xs) / n;
  if (xs.size() < 2) return r;
  std::vector<double> dev(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) dev[i] = (xs[i] - r.mean) * (xs[i] - r.mean);
  const double var = pairwise_sum(dev) / (n - 1.0);
  r.error = std::sqrt(var / n);
  return r;
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf) {
  if (xs.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d)};
}

}  // namespace potts_af
