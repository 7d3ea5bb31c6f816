#include "potts_af/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>

#include "potts_af/errors.hpp"
#include "potts_af/numeric.hpp"
#include "potts_af/parallel.hpp"
#include "potts_af/rng.hpp"

namespace potts_af {

std::string to_string(EstimateMethod m) {
  return m == EstimateMethod::exact_conditional ? "exact-conditional" : "monte-carlo";
}

CouplingMatrix sample_couplings(int n, double c, std::uint64_t seed) {
  require(n >= 1, "n must be >= 1");
  require(std::isfinite(c) && c >= 0.0, "c must be finite and >= 0");
  CouplingMatrix J(n);
  if (c == 0.0) return J;
  Rng rng(seed);
  const double mean = c / (2.0 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) J.set(i, j, static_cast<int>(rng.poisson(mean)));
  return J;
}

EdgeList sample_edges_given_k(int n, std::int64_t k, std::uint64_t seed) {
  require(n >= 1, "n must be >= 1");
  require(k >= 0, "k must be >= 0");
  Rng rng(seed);
  EdgeList edges;
  edges.reserve(static_cast<std::size_t>(k));
  for (std::int64_t e = 0; e < k; ++e) {
    const int i = static_cast<int>(rng.below(n));
    const int j = static_cast<int>(rng.below(n));
    edges.emplace_back(i, j);
  }
  return edges;
}

CouplingMatrix couplings_from_edges(int n, const EdgeList& edges) {
  CouplingMatrix J(n);
  for (auto [i, j] : edges) {
    require(i >= 0 && i < n && j >= 0 && j < n, "edge endpoint out of range");
    J.add(i, j);
  }
  return J;
}

namespace {

// All q^N configurations with, for every unordered pair a <= b, the indicator delta(s_a, s_b).
struct ConfigTable {
  int n = 0;
  int q = 0;
  std::size_t count = 0;
  std::vector<std::pair<int, int>> pairs;      // unordered, a <= b
  std::vector<std::vector<std::uint8_t>> eq;   // eq[pair][config]

  ConfigTable(int n_, int q_, std::uint64_t budget) : n(n_), q(q_) {
    std::vector<SpinConfig> configs;
    for_each_config(n, q, budget, [&](const SpinConfig& s) { configs.push_back(s); });
    count = configs.size();
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) pairs.emplace_back(a, b);
    eq.assign(pairs.size(), std::vector<std::uint8_t>(count, 0));
    for (std::size_t p = 0; p < pairs.size(); ++p)
      for (std::size_t c = 0; c < count; ++c)
        eq[p][c] = configs[c][pairs[p].first] == configs[c][pairs[p].second];
  }

  std::size_t pair_index(int a, int b) const {
    if (a > b) std::swap(a, b);
    // row-major over the upper triangle
    return static_cast<std::size_t>(a) * n - static_cast<std::size_t>(a) * (a - 1) / 2 + (b - a);
  }
  double pair_weight(std::size_t p) const {
    const double n2 = static_cast<double>(n) * n;
    return pairs[p].first == pairs[p].second ? 1.0 / n2 : 2.0 / n2;
  }
};

using Energies = std::vector<int>;
using LeafFn = std::function<void(const Energies&, std::span<double>)>;

struct ConditionalTable {
  int k_exact = 0;
  int k_max = 0;
  std::size_t dim = 1;
  std::vector<std::vector<double>> exact;  // [K][d] for K <= min(k_exact, k_max)
  std::vector<std::vector<double>> paths;  // [path][(K - k_exact - 1) * dim + d]
};

void add_pair(Energies& e, const std::vector<std::uint8_t>& mask, int sign) {
  for (std::size_t c = 0; c < e.size(); ++c) e[c] += sign * mask[c];
}

void exhaust(const ConfigTable& t, const LeafFn& leaf, Energies& e, int remaining, double weight,
             std::vector<double>& acc, std::vector<double>& scratch) {
  if (remaining == 0) {
    leaf(e, scratch);
    for (std::size_t d = 0; d < acc.size(); ++d) acc[d] += weight * scratch[d];
    return;
  }
  for (std::size_t p = 0; p < t.pairs.size(); ++p) {
    add_pair(e, t.eq[p], 1);
    exhaust(t, leaf, e, remaining - 1, weight * t.pair_weight(p), acc, scratch);
    add_pair(e, t.eq[p], -1);
  }
}

// Exhaustive average over all N^(2K) placements, using vertex-permutation symmetry on the first edge.
std::vector<double> exact_level(const ConfigTable& t, int k, std::size_t dim, const LeafFn& leaf) {
  if (k == 0) {
    Energies e(t.count, 0);
    std::vector<double> out(dim);
    leaf(e, out);
    return out;
  }
  struct Item {
    std::size_t first;
    double first_weight;
    long second;  // -1 when k == 1
  };
  std::vector<Item> items;
  std::vector<std::pair<std::size_t, double>> firsts;
  firsts.emplace_back(t.pair_index(0, 0), 1.0 / t.n);
  if (t.n > 1) firsts.emplace_back(t.pair_index(0, 1), (t.n - 1.0) / t.n);
  for (auto [p, w] : firsts) {
    if (k == 1) {
      items.push_back({p, w, -1});
    } else {
      for (std::size_t s = 0; s < t.pairs.size(); ++s) items.push_back({p, w, static_cast<long>(s)});
    }
  }
  std::vector<std::vector<double>> partial(items.size(), std::vector<double>(dim, 0.0));
  parallel_for(items.size(), [&](std::size_t i) {
    const Item& it = items[i];
    Energies e(t.count, 0);
    std::vector<double> scratch(dim);
    add_pair(e, t.eq[it.first], 1);
    double w = it.first_weight;
    int remaining = k - 1;
    if (it.second >= 0) {
      add_pair(e, t.eq[it.second], 1);
      w *= t.pair_weight(it.second);
      --remaining;
    }
    exhaust(t, leaf, e, remaining, w, partial[i], scratch);
  });
  std::vector<double> out(dim);
  std::vector<double> col(items.size());
  for (std::size_t d = 0; d < dim; ++d) {
    for (std::size_t i = 0; i < items.size(); ++i) col[i] = partial[i][d];
    out[d] = pairwise_sum(col);
  }
  return out;
}

ConditionalTable build_table(const ConfigTable& t, int k_max, const ConditioningOptions& opts, std::size_t dim,
                             const LeafFn& leaf) {
  ConditionalTable tab;
  tab.dim = dim;
  tab.k_max = k_max;
  if (t.n == 1) {
    tab.k_exact = k_max;
  } else {
    const double n2 = static_cast<double>(t.n) * t.n;
    int k = 0;
    while (std::pow(n2, k + 1) <= static_cast<double>(opts.placement_budget)) ++k;
    tab.k_exact = k;
  }
  const int top = std::min(tab.k_exact, k_max);
  for (int k = 0; k <= top; ++k) tab.exact.push_back(exact_level(t, k, dim, leaf));
  if (k_max > tab.k_exact) {
    const int span = k_max - tab.k_exact;
    tab.paths.assign(static_cast<std::size_t>(opts.mc_paths), std::vector<double>(span * dim, 0.0));
    parallel_for(tab.paths.size(), [&](std::size_t p) {
      Rng rng = Rng::stream(opts.seed, p);
      Energies e(t.count, 0);
      std::vector<double> scratch(dim);
      for (int k = 1; k <= k_max; ++k) {
        const int i = static_cast<int>(rng.below(t.n));
        const int j = static_cast<int>(rng.below(t.n));
        add_pair(e, t.eq[t.pair_index(i, j)], 1);
        if (k > tab.k_exact) {
          leaf(e, scratch);
          std::copy(scratch.begin(), scratch.end(), tab.paths[p].begin() + (k - tab.k_exact - 1) * dim);
        }
      }
    });
  }
  return tab;
}

// sum_K pi(K) g(values at K), split into the exact part and one Monte Carlo value per path.
struct WeightedSplit {
  double exact = 0.0;
  std::vector<double> per_path;
};

WeightedSplit weighted(const ConditionalTable& tab, const std::vector<double>& pi,
                       const std::function<double(std::span<const double>)>& g) {
  WeightedSplit r;
  std::vector<double> terms;
  for (std::size_t k = 0; k < tab.exact.size(); ++k) terms.push_back(pi[k] * g(tab.exact[k]));
  r.exact = pairwise_sum(terms);
  r.per_path.resize(tab.paths.size());
  for (std::size_t p = 0; p < tab.paths.size(); ++p) {
    double y = 0.0;
    for (int k = tab.k_exact + 1; k <= tab.k_max; ++k) {
      std::span<const double> v(tab.paths[p].data() + (k - tab.k_exact - 1) * tab.dim, tab.dim);
      y += pi[k] * g(v);
    }
    r.per_path[p] = y;
  }
  return r;
}

std::vector<double> poisson_weights(double lambda, int k_max) {
  std::vector<double> pi(k_max + 1);
  for (int k = 0; k <= k_max; ++k) pi[k] = poisson_pmf(k, lambda);
  return pi;
}

// Shifted Boltzmann factors of the energies and their sum; returns ln Z.
double boltzmann(const Energies& e, double beta, std::vector<double>& w, double* shifted_sum = nullptr) {
  const int emin = *std::min_element(e.begin(), e.end());
  const int emax = *std::max_element(e.begin(), e.end());
  std::vector<double> table(emax - emin + 1);
  for (int d = 0; d <= emax - emin; ++d) table[d] = std::exp(-beta * d);
  w.resize(e.size());
  for (std::size_t c = 0; c < e.size(); ++c) w[c] = table[e[c] - emin];
  const double z = pairwise_sum(w);
  if (shifted_sum) *shifted_sum = z;
  return -beta * emin + std::log(z);
}

}  // namespace

QuenchedEstimate quenched_pressure_exact(const ModelParams& params, int n, double eps,
                                         const ConditioningOptions& opts) {
  params.validate();
  require(n >= 1, "n must be >= 1");
  require(eps > 0.0, "eps must be > 0");
  QuenchedEstimate est;
  est.method = EstimateMethod::exact_conditional;
  const double log_q = std::log(params.q);
  if (params.c == 0.0 || params.beta == 0.0) {
    est.value = log_q;
    est.samples = 1;
    return est;
  }
  const double lambda = params.c * n / 2.0;
  const double scale = params.beta / n;
  const std::int64_t k_max = smallest_truncation(
      [&](std::int64_t k) { return scale * poisson_tail_mean(k, lambda); }, eps / 2.0, 0, opts.k_limit);
  if (k_max < 0) throw BudgetExceeded("quenched_pressure_exact: eps not reachable within k_limit");

  const ConfigTable table(n, params.q, opts.enumeration_budget);
  const double beta = params.beta;
  LeafFn leaf = [beta, n](const Energies& e, std::span<double> out) {
    std::vector<double> w;
    out[0] = boltzmann(e, beta, w) / n;
  };
  const auto tab = build_table(table, static_cast<int>(k_max), opts, 1, leaf);
  const auto pi = poisson_weights(lambda, static_cast<int>(k_max));
  const auto split = weighted(tab, pi, [](std::span<const double> v) { return v[0]; });
  const auto mc = mean_and_error(split.per_path);
  est.value = split.exact + mc.mean + poisson_sf(k_max, lambda) * log_q;
  est.stat_error = mc.error;
  est.tail_bound = scale * poisson_tail_mean(k_max, lambda);
  est.samples = tab.paths.empty() ? 1 : static_cast<std::int64_t>(tab.paths.size());
  return est;
}

QuenchedEstimate quenched_pressure_mc(const ModelParams& params, int n, std::int64_t samples, std::uint64_t seed,
                                      std::uint64_t enumeration_budget) {
  params.validate();
  require(n >= 1, "n must be >= 1");
  require(samples >= 2, "quenched_pressure_mc needs at least 2 samples");
  QuenchedEstimate est;
  est.method = EstimateMethod::monte_carlo;
  est.samples = samples;
  if (params.c == 0.0 || params.beta == 0.0) {
    est.value = std::log(params.q);
    return est;
  }
  if (config_count(params.q, n) > enumeration_budget)
    throw BudgetExceeded("quenched_pressure_mc: q^N exceeds enumeration budget");
  std::vector<double> vals(static_cast<std::size_t>(samples));
  parallel_for(vals.size(), [&](std::size_t s) {
    const auto J = sample_couplings(n, params.c, Rng::stream(seed, s).next());
    vals[s] = pressure_density(J, params.q, params.beta, enumeration_budget);
  });
  const auto me = mean_and_error(vals);
  est.value = me.mean;
  est.stat_error = me.error;
  return est;
}

QuenchedEstimate sum_rule_deficit(const ModelParams& params, int n, int r_max, int quad_points, std::uint64_t seed,
                                  const SumRuleOptions& opts) {
  params.validate();
  require(n >= 1, "n must be >= 1");
  require(r_max >= 1, "r_max must be >= 1");
  require(quad_points >= 3, "quad_points must be >= 3");
  QuenchedEstimate est;
  est.method = EstimateMethod::exact_conditional;
  est.samples = 1;
  if (params.c == 0.0 || params.beta == 0.0) return est;

  const int q = params.q;
  const double beta = params.beta;
  const double c = params.c;
  const double a = -std::expm1(-beta);
  const double lambda_max = c * n / 2.0;
  const std::int64_t k_max = smallest_truncation(
      [&](std::int64_t k) { return 0.5 * beta * c * poisson_sf(k, lambda_max); }, opts.k_tail_tolerance, 0,
      opts.conditioning.k_limit);
  if (k_max < 0) throw BudgetExceeded("sum_rule_deficit: K truncation not reachable within k_limit");

  std::vector<double> q_pow(r_max + 1);
  for (int r = 0; r <= r_max; ++r) q_pow[r] = std::pow(static_cast<double>(q), -r);
  const ConfigTable table(n, q, opts.conditioning.enumeration_budget);
  // leaf: f_R = N^-2 sum_ij <delta_ij>^R - q^-R, for R = 1..r_max
  LeafFn leaf = [&table, beta, r_max, n, &q_pow](const Energies& e, std::span<double> out) {
    std::vector<double> w;
    double z_shift = 0.0;
    boltzmann(e, beta, w, &z_shift);
    std::vector<double> two_point;
    for (std::size_t p = 0; p < table.pairs.size(); ++p) {
      if (table.pairs[p].first == table.pairs[p].second) continue;
      double s = 0.0;
      for (std::size_t cfg = 0; cfg < w.size(); ++cfg) s += w[cfg] * table.eq[p][cfg];
      two_point.push_back(s / z_shift);
    }
    const double n2 = static_cast<double>(n) * n;
    for (int r = 1; r <= r_max; ++r) {
      double s = n;
      for (double t : two_point) s += 2.0 * std::pow(t, r);
      out[r - 1] = s / n2 - q_pow[r];
    }
  };
  ConditioningOptions cond = opts.conditioning;
  cond.seed = seed;
  const auto tab = build_table(table, static_cast<int>(k_max), cond, static_cast<std::size_t>(r_max), leaf);

  std::vector<double> coef(r_max);
  for (int r = 1; r <= r_max; ++r) coef[r - 1] = std::pow(a, r) / r;
  auto series = [&coef](std::span<const double> v) {
    double s = 0.0;
    for (std::size_t r = 0; r < coef.size(); ++r) s += coef[r] * v[r];
    return s;
  };
  auto integrate = [&](int points, std::vector<double>& per_path) {
    const auto rule = gauss_legendre(points, 0.0, c);
    double exact = 0.0;
    per_path.assign(tab.paths.size(), 0.0);
    for (int i = 0; i < points; ++i) {
      const auto pi = poisson_weights(rule.nodes[i] * n / 2.0, static_cast<int>(k_max));
      const auto split = weighted(tab, pi, series);
      exact += 0.5 * rule.weights[i] * split.exact;
      for (std::size_t p = 0; p < per_path.size(); ++p) per_path[p] += 0.5 * rule.weights[i] * split.per_path[p];
    }
    return exact;
  };
  std::vector<double> per_path;
  const double exact_full = integrate(quad_points, per_path);
  const auto mc = mean_and_error(per_path);
  const double full = exact_full + mc.mean;
  const double exact_coarse = integrate((quad_points + 1) / 2, per_path);
  const double coarse = exact_coarse + mean_and_error(per_path).mean;

  est.value = full;
  est.stat_error = mc.error;
  est.samples = tab.paths.empty() ? 1 : static_cast<std::int64_t>(tab.paths.size());
  const double r_tail = 0.5 * c * std::pow(a, r_max + 1) / ((r_max + 1) * (1.0 - a));
  const double k_tail = 0.5 * beta * c * poisson_sf(k_max, lambda_max);
  est.tail_bound = std::abs(full - coarse) + r_tail + k_tail;
  return est;
}

double restricted_partition_balanced(const CouplingMatrix& J, double beta, int q, std::uint64_t budget) {
  require(q >= 2, "q must be >= 2");
  require(!std::isnan(beta) && beta >= 0.0, "beta must be >= 0");
  const int n = J.size();
  if (n % q != 0) throw DomainError("restricted_partition_balanced: N must be divisible by q");
  const int per = n / q;
  LogSumExp acc;
  double ground = 0.0;
  std::vector<int> counts(q);
  for_each_config_energy(J, q, budget, [&](const SpinConfig& s, std::int64_t e) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int v : s) ++counts[v];
    for (int v : counts)
      if (v != per) return;
    if (std::isinf(beta)) {
      ground += e == 0;
    } else {
      acc.add(-beta * static_cast<double>(e));
    }
  });
  if (std::isinf(beta)) return ground > 0 ? std::log(ground) : -kInf;
  return acc.value();
}

double balanced_count(int n, int q) {
  require(q >= 2 && n >= 0 && n % q == 0, "balanced_count: N must be a multiple of q");
  return std::round(std::exp(log_factorial(n) - q * log_factorial(n / q)));
}

BalancedMoments conditional_moments_balanced(int n, int q, double beta, std::int64_t k, std::uint64_t table_budget) {
  require(q >= 2, "q must be >= 2");
  require(n >= q && n % q == 0, "conditional_moments_balanced: N must be a positive multiple of q");
  require(!std::isnan(beta) && beta >= 0.0, "beta must be >= 0");
  require(k >= 0, "K must be >= 0");
  const double a = -std::expm1(-beta);
  const double kk = static_cast<double>(k);
  BalancedMoments m;
  m.first = balanced_count(n, q) * std::pow(1.0 - a / q, kk);

  const int per = n / q;
  std::vector<int> cells(static_cast<std::size_t>(q) * q, 0);
  std::vector<int> col_left(q, per);
  std::vector<double> terms;
  std::uint64_t visited = 0;
  const double log_nfact = log_factorial(n);
  std::function<void(int, int, int)> fill = [&](int row, int col, int row_left) {
    if (row == q) {
      if (++visited > table_budget) throw BudgetExceeded("conditional_moments_balanced: pair-table budget exceeded");
      double log_mult = log_nfact;
      double sq = 0.0;
      for (int v : cells) {
        log_mult -= log_factorial(v);
        const double mu = static_cast<double>(v) / n;
        sq += mu * mu;
      }
      const double w = std::log(1.0 - 2.0 * a / q + a * a * sq);
      terms.push_back(std::exp(log_mult + kk * w));
      return;
    }
    if (col == q - 1) {
      if (row_left > col_left[col]) return;
      cells[row * q + col] = row_left;
      col_left[col] -= row_left;
      fill(row + 1, 0, per);
      col_left[col] += row_left;
      return;
    }
    for (int v = std::min(row_left, col_left[col]); v >= 0; --v) {
      cells[row * q + col] = v;
      col_left[col] -= v;
      fill(row, col + 1, row_left - v);
      col_left[col] += v;
    }
  };
  fill(0, 0, per);
  m.second = pairwise_sum(terms);
  return m;
}

}  // namespace potts_af
