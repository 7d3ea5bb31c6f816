#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace potts_af {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Running log-sum-exp with rescaling on a new maximum.
class LogSumExp {
 public:
  void add(double log_term) {
    if (log_term == -kInf) return;
    if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }
  void add(double log_term, double weight) {
    if (weight <= 0.0) return;
    add(log_term + std::log(weight));
  }
  double value() const { return max_ == -kInf ? -kInf : max_ + std::log(sum_); }

 private:
  double max_ = -kInf;
  double sum_ = 0.0;
};

double log_sum_exp(std::span<const double> xs);

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule mapped to [a, b].
Quadrature gauss_legendre(int n, double a, double b);

double log_factorial(std::int64_t n);
double poisson_log_pmf(std::int64_t k, double lambda);
double poisson_pmf(std::int64_t k, double lambda);
// P(K > k) for K ~ Poisson(lambda), summed directly in the far tail.
double poisson_sf(std::int64_t k, double lambda);
// E[K 1{K > k}] = lambda P(K >= k).
double poisson_tail_mean(std::int64_t k, double lambda);

// Smallest k >= start with bound(k) <= eps; returns -1 if none up to limit.
std::int64_t smallest_truncation(const std::function<double(std::int64_t)>& bound, double eps,
                                 std::int64_t start, std::int64_t limit);

double log_multinomial(std::span<const int> counts);
double composition_count(int total, int parts);
// Calls fn(counts) for every vector of `parts` nonnegative integers summing to `total`,
// in a fixed order (first count largest first).
void for_each_composition(int total, int parts, const std::function<void(const std::vector<int>&)>& fn);

struct MeanError {
  double mean = 0.0;
  double error = 0.0;
};
// Sample mean and one standard error of the mean; pairwise-summed.
MeanError mean_and_error(std::span<const double> xs);

// Kolmogorov distribution survival function P(K > lambda).
double kolmogorov_sf(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// One-sample test against a continuous cdf (asymptotic p-value with Stephens' small-sample factor).
KsResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace potts_af
