#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "potts_af/model_core.hpp"

namespace potts_af {

enum class EstimateMethod { exact_conditional, monte_carlo };
std::string to_string(EstimateMethod m);

struct QuenchedEstimate {
  double value = 0.0;
  double stat_error = 0.0;   // one standard error
  double tail_bound = 0.0;   // certified truncation remainder
  std::int64_t samples = 0;
  EstimateMethod method = EstimateMethod::exact_conditional;

  // tail_bound + z * stat_error
  double error(double z = 4.0) const { return tail_bound + z * stat_error; }
};

using EdgeList = std::vector<std::pair<int, int>>;

CouplingMatrix sample_couplings(int n, double c, std::uint64_t seed);
EdgeList sample_edges_given_k(int n, std::int64_t k, std::uint64_t seed);
CouplingMatrix couplings_from_edges(int n, const EdgeList& edges);

struct ConditioningOptions {
  // K_exact is the largest K with N^(2K) <= placement_budget.
  std::uint64_t placement_budget = 1'000'000;
  // Monte Carlo edge paths used for K_exact < K <= K_max.
  std::int64_t mc_paths = 2000;
  std::uint64_t seed = 0x5eed;
  std::uint64_t enumeration_budget = kDefaultEnumerationBudget;
  std::int64_t k_limit = 5000;
};

// p_N(beta, c) by conditioning on the total edge count. Values for K <= K_exact are exhaustive
// averages over placements, K_exact < K <= K_max use Monte Carlo edge paths, and the K > K_max
// remainder is certified through |ln Z(K) - ln Z(0)| <= beta K.
QuenchedEstimate quenched_pressure_exact(const ModelParams& params, int n, double eps,
                                         const ConditioningOptions& opts = {});

QuenchedEstimate quenched_pressure_mc(const ModelParams& params, int n, std::int64_t samples, std::uint64_t seed,
                                      std::uint64_t enumeration_budget = kDefaultEnumerationBudget);

struct SumRuleOptions {
  ConditioningOptions conditioning;
  double k_tail_tolerance = 1e-7;
};

// 1/2 sum_R (1-e^-beta)^R / R  sum_s int_0^c <<(rho(s) - q^-R)^2>> dc'.
// tail_bound = quadrature estimate + R truncation + K truncation.
QuenchedEstimate sum_rule_deficit(const ModelParams& params, int n, int r_max, int quad_points, std::uint64_t seed,
                                  const SumRuleOptions& opts = {});

// ln of the sum over balanced configurations (N/q sites of each color); beta = +inf counts
// balanced zero-energy configurations (-inf if none).
double restricted_partition_balanced(const CouplingMatrix& J, double beta, int q,
                                     std::uint64_t budget = kDefaultEnumerationBudget);

double balanced_count(int n, int q);

struct BalancedMoments {
  double first = 0.0;
  double second = 0.0;
};

// E[Z~ | |J| = K] and E[Z~^2 | |J| = K], the latter by enumerating balanced integer pair tables.
BalancedMoments conditional_moments_balanced(int n, int q, double beta, std::int64_t k,
                                             std::uint64_t table_budget = 10'000'000);

}  // namespace potts_af
