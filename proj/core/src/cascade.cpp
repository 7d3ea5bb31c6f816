#include "potts_af/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>

#include "potts_af/errors.hpp"
#include "potts_af/parallel.hpp"
#include "potts_af/rng.hpp"

namespace potts_af {

double CascadeSpec::level(int l) const {
  if (l == 0 && first_to_zero()) return 0.0;
  if (l == depth - 1 && last_to_one()) return 1.0;
  return levels.at(static_cast<std::size_t>(l));
}

void CascadeSpec::validate() const {
  require(depth >= 1 && depth <= 3, "cascade depth must be 1, 2 or 3");
  require(levels.size() == static_cast<std::size_t>(depth), "cascade needs one level parameter per depth");
  require(first != LimitFlag::to_one_last, "the first level cannot be sent to 1");
  require(last != LimitFlag::to_zero_first, "the last level cannot be sent to 0");
  require(!(depth == 1 && first_to_zero() && last_to_one()), "a single level cannot take both limits");
  double prev = -1.0;
  for (int l = 0; l < depth; ++l) {
    const double m = level(l);
    const bool flagged = (l == 0 && first_to_zero()) || (l == depth - 1 && last_to_one());
    if (!flagged) require(m > 0.0 && m < 1.0, "cascade levels must lie in (0, 1)");
    require(m > prev, "cascade levels must be strictly increasing");
    prev = m;
  }
}

CascadeSpec CascadeSpec::annealed() { return {1, {1.0}, LimitFlag::none, LimitFlag::to_one_last}; }

CascadeSpec CascadeSpec::replica_symmetric() {
  return {2, {0.0, 1.0}, LimitFlag::to_zero_first, LimitFlag::to_one_last};
}

void SpinHierarchySpec::validate() const {
  require(q >= 2, "q must be >= 2");
  if (kind == Kind::symmetric_t)
    require(t >= -1.0 / (q - 1) - 1e-15 && t <= 1.0 + 1e-15, "t must lie in [-1/(q-1), 1]");
}

std::string to_string(SpinHierarchySpec::Kind k) {
  return k == SpinHierarchySpec::Kind::uniform ? "uniform" : "symmetric-t";
}

std::string to_string(CascadePath p) {
  switch (p) {
    case CascadePath::exact: return "exact";
    case CascadePath::sampled: return "sampled";
    case CascadePath::cascade: return "cascade";
  }
  return "?";
}

namespace {

void check_m(double m) {
  if (!(m > 0.0 && m < 1.0)) throw DomainError("PD parameter m must lie in (0, 1)");
}

// ln of the atoms, descending, plus the log of the expected residual mass.
void pd_log_atoms(double m, int n, Rng& rng, std::vector<double>& out, double& log_tail) {
  out.resize(static_cast<std::size_t>(n));
  double gamma = 0.0;
  for (int k = 0; k < n; ++k) {
    gamma += rng.exponential();
    out[k] = -std::log(gamma) / m;
  }
  // m/(1-m) xi_n^(1-m)
  log_tail = std::log(m / (1.0 - m)) + (1.0 - m) * out.back();
}

}  // namespace

AtomSet sample_pd_atoms(double m, int n_atoms, std::uint64_t seed) {
  check_m(m);
  require(n_atoms >= 1, "n_atoms must be >= 1");
  Rng rng(seed);
  std::vector<double> logs;
  double log_tail = 0.0;
  pd_log_atoms(m, n_atoms, rng, logs, log_tail);
  AtomSet s;
  s.atoms.resize(logs.size());
  for (std::size_t k = 0; k < logs.size(); ++k) s.atoms[k] = std::exp(logs[k]);
  s.tail_mass_bound = std::exp(log_tail);
  return s;
}

CascadeTree sample_cascade(const CascadeSpec& spec, const std::vector<int>& branching, std::uint64_t seed) {
  spec.validate();
  if (spec.last_to_one()) throw Unsupported("an explicit cascade needs a finite last level");
  require(branching.size() == static_cast<std::size_t>(spec.depth), "one branching factor per level");
  for (int b : branching) require(b >= 1, "branching factors must be >= 1");

  struct Node {
    double log_mass;
    double rel_tail;
  };
  // Build level by level from the root; node ids are assigned breadth-first.
  std::vector<std::vector<double>> path_logw(1, std::vector<double>{0.0});
  std::vector<std::vector<double>> node_tail(spec.depth);
  std::vector<std::vector<std::vector<double>>> child_logw(spec.depth);
  std::uint64_t node_id = 0;
  for (int l = 0; l < spec.depth; ++l) {
    const auto& parents = path_logw.back();
    std::vector<double> next;
    const bool degenerate = l == 0 && spec.first_to_zero();
    const int b = degenerate ? 1 : branching[l];
    child_logw[l].resize(parents.size());
    node_tail[l].resize(parents.size());
    for (std::size_t p = 0; p < parents.size(); ++p, ++node_id) {
      std::vector<double> logs;
      double log_tail = -kInf;
      if (degenerate) {
        logs.assign(1, 0.0);
      } else {
        Rng rng = Rng::stream(seed, node_id);
        pd_log_atoms(spec.level(l), b, rng, logs, log_tail);
      }
      for (double lw : logs) next.push_back(parents[p] + lw);
      child_logw[l][p] = std::move(logs);
      node_tail[l][p] = log_tail;
    }
    path_logw.push_back(std::move(next));
  }

  CascadeTree tree;
  tree.leaf_log_weights = path_logw.back();
  // Bottom-up subtree masses and relative truncation loss.
  std::vector<Node> below(tree.leaf_log_weights.size(), Node{0.0, 0.0});
  for (int l = spec.depth - 1; l >= 0; --l) {
    std::vector<Node> here(child_logw[l].size());
    std::size_t child = 0;
    for (std::size_t p = 0; p < child_logw[l].size(); ++p) {
      LogSumExp mass, mean_child;
      std::vector<double> contrib;
      const auto& logs = child_logw[l][p];
      for (double lw : logs) {
        const Node& c = below[child++];
        mass.add(lw + c.log_mass);
        mean_child.add(c.log_mass);
        contrib.push_back(lw + c.log_mass);
      }
      const double lm = mass.value();
      double rel = 0.0;
      for (std::size_t i = 0; i < contrib.size(); ++i)
        rel += std::exp(contrib[i] - lm) * below[child - contrib.size() + i].rel_tail;
      if (node_tail[l][p] != -kInf)
        rel += std::exp(node_tail[l][p] + mean_child.value() - std::log(static_cast<double>(logs.size())) - lm);
      here[p] = {lm, rel};
    }
    below = std::move(here);
  }
  tree.log_normalizer = below.front().log_mass;
  tree.tail_fraction = below.front().rel_tail;
  return tree;
}

StabilityReport stability_test(double m, int n_atoms, int draws, std::uint64_t seed, const StabilityOptions& opts) {
  check_m(m);
  require(n_atoms >= 3, "stability_test needs at least 3 atoms");
  require(draws >= 2, "stability_test needs at least 2 draws");
  require(opts.c_scale > 0.0, "c_scale must be positive");
  StabilityReport rep;
  rep.draws = draws;
  // ln X ~ N(0, 1) gives E[X^m] = e^(m^2/2)
  const double c = opts.law == MultiplierLaw::log_normal ? std::exp(0.5 * m) : 1.0;
  rep.c_factor = c * opts.c_scale;
  std::vector<double> lhs(static_cast<std::size_t>(draws)), rhs(static_cast<std::size_t>(draws));
  const double log_c = std::log(rep.c_factor);
  parallel_for(static_cast<std::size_t>(draws), [&](std::size_t d) {
    std::vector<double> logs;
    double log_tail = 0.0;
    Rng ra = Rng::stream(seed, 2 * d);
    pd_log_atoms(m, n_atoms, ra, logs, log_tail);
    if (opts.law == MultiplierLaw::log_normal)
      for (double& v : logs) v += ra.normal();
    std::partial_sort(logs.begin(), logs.begin() + 3, logs.end(), std::greater<>());
    lhs[d] = logs[0] + logs[1] + logs[2];
    Rng rb = Rng::stream(seed, 2 * d + 1);
    pd_log_atoms(m, 3, rb, logs, log_tail);
    rhs[d] = 3.0 * log_c + logs[0] + logs[1] + logs[2];
  });
  const auto ks = ks_two_sample(std::move(lhs), std::move(rhs));
  rep.statistic = ks.statistic;
  rep.p_value = ks.p_value;
  rep.passed = ks.p_value > kStabilityAlpha;
  return rep;
}

MeanError laplace_functional(double m, double p, double lambda, int n_atoms, int draws, std::uint64_t seed) {
  check_m(m);
  require(p > m, "the Laplace functional needs p > m");
  require(lambda > 0.0, "lambda must be positive");
  require(n_atoms >= 1 && draws >= 2, "need n_atoms >= 1 and draws >= 2");
  std::vector<double> vals(static_cast<std::size_t>(draws));
  parallel_for(vals.size(), [&](std::size_t d) {
    std::vector<double> logs;
    double log_tail = 0.0;
    Rng rng = Rng::stream(seed, d);
    pd_log_atoms(m, n_atoms, rng, logs, log_tail);
    std::vector<double> powers(logs.size());
    for (std::size_t k = 0; k < logs.size(); ++k) powers[k] = std::exp(p * logs[k]);
    vals[d] = std::exp(-lambda * pairwise_sum(powers));
  });
  return mean_and_error(vals);
}

namespace {

// Per-site and per-pair functionals of the cavity fields under a finitely supported hierarchy.
// Centers S (one per cavity index) live at depth L-1 and leaves draw tau ~ t delta(., S) + (1-t)/q.
class Ansatz {
 public:
  Ansatz(const ModelParams& p, const CascadeSpec& spec, const SpinHierarchySpec& hier, double work_budget)
      : q_(p.q), beta_(p.beta), spec_(spec), budget_(work_budget) {
    t_ = (hier.kind == SpinHierarchySpec::Kind::symmetric_t && spec.depth >= 2) ? hier.t : 0.0;
    a_ = -std::expm1(-beta_);
    u_ = (1.0 - t_) / q_;
  }

  double t() const { return t_; }
  // Randomness at an m -> 0 level enters linearly and can be sampled directly.
  bool log_level() const { return spec_.first_to_zero() && spec_.depth <= 2; }
  bool log_level_is_leaf() const { return spec_.depth == 1; }

  // Expectation of the site functional for a site with k cavity indices.
  double site(int k) {
    if (spec_.depth == 1 || t_ == 0.0) return leaf(centers_all_zero(k), k);
    const double m = spec_.level(spec_.depth - 2);
    const bool log_mode = spec_.depth == 2 && spec_.first_to_zero();
    std::map<std::vector<int>, double> cache;
    LogSumExp power;
    std::vector<double> linear;
    const double log_q = std::log(static_cast<double>(q_));
    for_each_composition(k, q_, [&](const std::vector<int>& s) {
      auto key = s;
      std::sort(key.begin(), key.end());
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, leaf(s, k)).first;
      const double lw = log_multinomial(s) - k * log_q;
      if (log_mode)
        linear.push_back(std::exp(lw) * it->second);
      else
        power.add(lw + m * it->second);
    });
    return log_mode ? pairwise_sum(linear) : power.value() / m;
  }

  // Site functional given the counts drawn at the m -> 0 level (tau counts for L = 1, center counts for L = 2).
  double site_given(const std::vector<int>& counts, int k) {
    if (log_level_is_leaf()) return log_w(counts);
    if (t_ == 0.0) return cached_leaf(centers_all_zero(k), k);
    return cached_leaf(counts, k);
  }

  // Pair functional: the two cavity indices of an edge.
  double pair() const {
    if (spec_.depth == 1 || t_ == 0.0) return pair_leaf(1.0 / q_);
    const double m = spec_.level(spec_.depth - 2);
    const double same = pair_leaf(t_ * t_ + (1.0 - t_ * t_) / q_);
    const double diff = pair_leaf((1.0 - t_ * t_) / q_);
    const double ps = 1.0 / q_;
    if (spec_.depth == 2 && spec_.first_to_zero()) return ps * same + (1.0 - ps) * diff;
    LogSumExp acc;
    acc.add(std::log(ps) + m * same);
    acc.add(std::log1p(-ps) + m * diff);
    return acc.value() / m;
  }

  // L = 1: `same` means tau_1 = tau_2; L = 2: S_1 = S_2.
  double pair_given(bool same) const {
    if (log_level_is_leaf()) return same ? -beta_ : 0.0;
    if (t_ == 0.0) return pair_leaf(1.0 / q_);
    return pair_leaf(same ? t_ * t_ + (1.0 - t_ * t_) / q_ : (1.0 - t_ * t_) / q_);
  }

  double log_w(const std::vector<int>& n) const {
    LogSumExp acc;
    for (int v : n) acc.add(v == 0 ? 0.0 : -beta_ * v);
    return acc.value();
  }

 private:
  std::vector<int> centers_all_zero(int k) const {
    std::vector<int> s(q_, 0);
    s[0] = k;
    return s;
  }

  double cached_leaf(const std::vector<int>& s, int k) {
    auto key = s;
    std::sort(key.begin(), key.end());
    {
      std::lock_guard lock(mu_);
      auto it = leaf_cache_.find(key);
      if (it != leaf_cache_.end()) return it->second;
    }
    const double v = leaf(s, k);
    std::lock_guard lock(mu_);
    leaf_cache_.emplace(std::move(key), v);
    return v;
  }

  // Innermost level given center counts s (sum k).
  double leaf(const std::vector<int>& s, int k) const {
    if (spec_.last_to_one()) {
      if (t_ == 0.0) return std::log(static_cast<double>(q_)) + k * std::log1p(-a_ / q_);
      const double log_same = std::log1p(-a_ * (t_ + u_));
      const double log_diff = std::log1p(-a_ * u_);
      LogSumExp acc;
      for (int sigma = 0; sigma < q_; ++sigma) {
        const int ns = s[sigma];
        acc.add((ns == 0 ? 0.0 : ns * log_same) + (k - ns == 0 ? 0.0 : (k - ns) * log_diff));
      }
      return acc.value();
    }
    const auto dist = leaf_distribution(s, k);
    if (spec_.depth == 1 && spec_.first_to_zero()) {
      std::vector<double> terms;
      terms.reserve(dist.size());
      for (const auto& [code, prob] : dist) terms.push_back(prob * log_w(decode(code)));
      return pairwise_sum(terms);
    }
    const double m = spec_.level(spec_.depth - 1);
    LogSumExp acc;
    for (const auto& [code, prob] : dist) acc.add(m * log_w(decode(code)), prob);
    return acc.value() / m;
  }

  static constexpr int kBits = 6;

  std::vector<int> decode(std::uint64_t code) const {
    std::vector<int> n(q_);
    for (int r = 0; r < q_; ++r) n[r] = static_cast<int>((code >> (kBits * r)) & ((1u << kBits) - 1));
    return n;
  }

  // Law of the tau color counts given center counts, as (code, probability) sorted by code.
  std::vector<std::pair<std::uint64_t, double>> leaf_distribution(const std::vector<int>& s, int k) const {
    if (q_ * kBits > 64 || k >= (1 << kBits)) throw Unsupported("finite-m leaf level needs q <= 10 and degree < 64");
    if (composition_count(k, q_) * k * q_ > budget_) throw BudgetExceeded("cascade leaf work budget exceeded");
    std::map<std::uint64_t, double> cur{{0, 1.0}};
    for (int r = 0; r < q_; ++r) {
      for (int i = 0; i < s[r]; ++i) {
        std::map<std::uint64_t, double> nxt;
        for (const auto& [code, prob] : cur)
          for (int sigma = 0; sigma < q_; ++sigma) {
            const double p = u_ + (sigma == r ? t_ : 0.0);
            if (p <= 0.0) continue;
            nxt[code + (std::uint64_t{1} << (kBits * sigma))] += prob * p;
          }
        cur = std::move(nxt);
      }
    }
    return {cur.begin(), cur.end()};
  }

  double pair_leaf(double p_eq) const {
    if (spec_.last_to_one()) return std::log1p(-a_ * p_eq);
    if (spec_.depth == 1 && spec_.first_to_zero()) return -beta_ * p_eq;
    const double m = spec_.level(spec_.depth - 1);
    return std::log1p(std::expm1(-m * beta_) * p_eq) / m;
  }

  int q_;
  double beta_;
  CascadeSpec spec_;
  double budget_;
  double t_ = 0.0;
  double a_ = 0.0;
  double u_ = 0.0;
  std::mutex mu_;
  std::map<std::vector<int>, double> leaf_cache_;
};

void check_inputs(const ModelParams& params, int n, const CascadeSpec& spec, const SpinHierarchySpec& hier,
                  std::int64_t samples, const CascadeOptions& opts) {
  params.validate();
  spec.validate();
  hier.validate();
  require(hier.q == params.q, "hierarchy q differs from model q");
  require(n >= 1, "cavity size n must be >= 1");
  require(opts.eps > 0.0, "eps must be positive");
  if (opts.path != CascadePath::exact) require(samples >= 2, "Monte Carlo paths need at least 2 samples");
  if (opts.path == CascadePath::cascade) {
    require(opts.n_atoms >= 1, "n_atoms must be >= 1");
    if (spec.last_to_one()) throw Unsupported("the explicit cascade path needs a finite last level");
  }
}

std::vector<int> branching_for(const CascadeSpec& spec, int n_atoms) {
  const int free_levels = spec.depth - (spec.first_to_zero() ? 1 : 0);
  const int b = free_levels <= 1 ? n_atoms
                                 : std::max(8, static_cast<int>(std::lround(std::pow(n_atoms, 1.0 / free_levels))));
  return std::vector<int>(spec.depth, b);
}

QuenchedEstimate finish(std::vector<double>& vals) {
  QuenchedEstimate est;
  const auto me = mean_and_error(vals);
  est.value = me.mean;
  est.stat_error = me.error;
  est.samples = static_cast<std::int64_t>(vals.size());
  est.method = EstimateMethod::monte_carlo;
  return est;
}

// Leaf spins for an explicit cascade: per leaf and per index, given centers per depth-(L-1) node.
struct LeafSpins {
  std::vector<int> tau;  // leaf-major: tau[leaf * idx + j]
  std::vector<int> center;
};

LeafSpins draw_leaf_spins(const std::vector<int>& branching, const CascadeSpec& spec, int q, double t,
                          std::size_t leaves, std::size_t indices, Rng& rng) {
  LeafSpins sp;
  const std::size_t per_parent =
      spec.first_to_zero() && spec.depth == 1 ? 1 : static_cast<std::size_t>(branching.back());
  const std::size_t parents = leaves / per_parent;
  sp.center.assign(parents * indices, 0);
  if (t != 0.0)
    for (auto& s : sp.center) s = static_cast<int>(rng.below(q));
  sp.tau.resize(leaves * indices);
  const double p_center = t + (1.0 - t) / q;
  for (std::size_t leaf = 0; leaf < leaves; ++leaf) {
    const std::size_t parent = leaf / per_parent;
    for (std::size_t j = 0; j < indices; ++j) {
      if (t == 0.0) {
        sp.tau[leaf * indices + j] = static_cast<int>(rng.below(q));
        continue;
      }
      const int s = sp.center[parent * indices + j];
      // tau = s with probability t + (1-t)/q, else uniform on the other colors
      if (rng.uniform() < p_center) {
        sp.tau[leaf * indices + j] = s;
      } else {
        const int o = static_cast<int>(rng.below(q - 1));
        sp.tau[leaf * indices + j] = o >= s ? o + 1 : o;
      }
    }
  }
  return sp;
}

constexpr std::uint64_t kG1Stream = 0x67316731;
constexpr std::uint64_t kG2Stream = 0x67326732;

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t s = seed ^ tag;
  return splitmix64(s);
}

}  // namespace

QuenchedEstimate cavity_g1(const ModelParams& params, int n, const CascadeSpec& spec, const SpinHierarchySpec& hier,
                           std::int64_t samples, std::uint64_t seed, const CascadeOptions& opts) {
  check_inputs(params, n, spec, hier, samples, opts);
  const int q = params.q;
  const double log_q = std::log(static_cast<double>(q));
  const double c = params.c;
  if (c == 0.0) {
    QuenchedEstimate est;
    est.value = log_q;
    est.samples = opts.path == CascadePath::exact ? 0 : samples;
    est.method = opts.path == CascadePath::exact ? EstimateMethod::exact_conditional : EstimateMethod::monte_carlo;
    return est;
  }
  Ansatz ans(params, spec, hier, opts.work_budget);
  const std::uint64_t base = stream_seed(seed, kG1Stream);

  if (opts.path == CascadePath::exact) {
    QuenchedEstimate est;
    if (spec.last_to_one() && ans.t() == 0.0) {
      est.value = log_q + c * std::log1p(-(-std::expm1(-params.beta)) / q);
      return est;
    }
    // |F(k) - ln q| <= beta k
    const std::int64_t k_max = smallest_truncation(
        [&](std::int64_t k) { return params.beta * poisson_tail_mean(k, c); }, opts.eps, 0, 10000);
    if (k_max < 0) throw BudgetExceeded("cavity_g1: degree truncation not reachable");
    std::vector<double> terms(static_cast<std::size_t>(k_max) + 1);
    parallel_for(terms.size(), [&](std::size_t k) {
      terms[k] = poisson_pmf(static_cast<std::int64_t>(k), c) * ans.site(static_cast<int>(k));
    });
    est.value = pairwise_sum(terms) + log_q * poisson_sf(k_max, c);
    est.tail_bound = params.beta * poisson_tail_mean(k_max, c);
    est.samples = 0;
    return est;
  }

  std::vector<double> vals(static_cast<std::size_t>(samples));
  if (opts.path == CascadePath::sampled) {
    std::unordered_map<int, double> site_mean;
    std::mutex mu;
    auto mean_of = [&](int k) {
      {
        std::lock_guard lock(mu);
        auto it = site_mean.find(k);
        if (it != site_mean.end()) return it->second;
      }
      const double v = ans.site(k);
      std::lock_guard lock(mu);
      site_mean.emplace(k, v);
      return v;
    };
    parallel_for(vals.size(), [&](std::size_t s) {
      Rng rng = Rng::stream(base, s);
      const std::int64_t total = rng.poisson(c * n);
      std::vector<int> degree(n, 0);
      for (std::int64_t i = 0; i < total; ++i) ++degree[rng.below(n)];
      std::vector<double> per_site(n);
      for (int j = 0; j < n; ++j) {
        const int k = degree[j];
        if (!ans.log_level()) {
          per_site[j] = mean_of(k);
          continue;
        }
        std::vector<int> counts(q, 0);
        for (int i = 0; i < k; ++i) ++counts[rng.below(q)];
        per_site[j] = ans.site_given(counts, k);
      }
      vals[s] = pairwise_sum(per_site) / n;
    });
    return finish(vals);
  }

  const auto branching = branching_for(spec, opts.n_atoms);
  const double t = ans.t();
  parallel_for(vals.size(), [&](std::size_t s) {
    Rng rng = Rng::stream(base, s);
    const std::int64_t total = rng.poisson(c * n);
    std::vector<int> site_of(static_cast<std::size_t>(total));
    for (auto& v : site_of) v = static_cast<int>(rng.below(n));
    const auto tree = sample_cascade(spec, branching, rng.next());
    const std::size_t leaves = tree.leaf_log_weights.size();
    const auto idx = static_cast<std::size_t>(total);
    const auto spins = draw_leaf_spins(branching, spec, q, t, leaves, idx, rng);
    LogSumExp acc;
    std::vector<int> counts(static_cast<std::size_t>(n) * q);
    for (std::size_t leaf = 0; leaf < leaves; ++leaf) {
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t j = 0; j < idx; ++j) ++counts[site_of[j] * q + spins.tau[leaf * idx + j]];
      double log_x = 0.0;
      for (int site = 0; site < n; ++site) {
        LogSumExp w;
        for (int sigma = 0; sigma < q; ++sigma) {
          const int v = counts[site * q + sigma];
          w.add(v == 0 ? 0.0 : -params.beta * v);
        }
        log_x += w.value();
      }
      acc.add(tree.leaf_log_weights[leaf] + log_x);
    }
    vals[s] = (acc.value() - tree.log_normalizer) / n;
  });
  return finish(vals);
}

QuenchedEstimate cavity_g2(const ModelParams& params, int n, const CascadeSpec& spec, const SpinHierarchySpec& hier,
                           std::int64_t samples, std::uint64_t seed, const CascadeOptions& opts) {
  check_inputs(params, n, spec, hier, samples, opts);
  const int q = params.q;
  const double c = params.c;
  if (c == 0.0 || params.beta == 0.0) {
    QuenchedEstimate est;
    est.samples = opts.path == CascadePath::exact ? 0 : samples;
    est.method = opts.path == CascadePath::exact ? EstimateMethod::exact_conditional : EstimateMethod::monte_carlo;
    return est;
  }
  Ansatz ans(params, spec, hier, opts.work_budget);
  const std::uint64_t base = stream_seed(seed, kG2Stream);

  if (opts.path == CascadePath::exact) {
    QuenchedEstimate est;
    est.value = 0.5 * c * ans.pair();
    return est;
  }

  std::vector<double> vals(static_cast<std::size_t>(samples));
  if (opts.path == CascadePath::sampled) {
    const double mean = ans.pair();
    parallel_for(vals.size(), [&](std::size_t s) {
      Rng rng = Rng::stream(base, s);
      const std::int64_t pairs = rng.poisson(0.5 * c * n);
      if (!ans.log_level()) {
        vals[s] = static_cast<double>(pairs) * mean / n;
        return;
      }
      std::vector<double> per_pair(static_cast<std::size_t>(pairs));
      for (auto& v : per_pair) {
        const auto a = rng.below(q);
        const auto b = rng.below(q);
        v = ans.pair_given(a == b);
      }
      vals[s] = pairwise_sum(per_pair) / n;
    });
    return finish(vals);
  }

  const auto branching = branching_for(spec, opts.n_atoms);
  const double t = ans.t();
  parallel_for(vals.size(), [&](std::size_t s) {
    Rng rng = Rng::stream(base, s);
    const std::int64_t pairs = rng.poisson(0.5 * c * n);
    const auto tree = sample_cascade(spec, branching, rng.next());
    const std::size_t leaves = tree.leaf_log_weights.size();
    const auto idx = static_cast<std::size_t>(2 * pairs);
    const auto spins = draw_leaf_spins(branching, spec, q, t, leaves, idx, rng);
    LogSumExp acc;
    for (std::size_t leaf = 0; leaf < leaves; ++leaf) {
      std::int64_t equal = 0;
      for (std::size_t e = 0; e < static_cast<std::size_t>(pairs); ++e)
        equal += spins.tau[leaf * idx + 2 * e] == spins.tau[leaf * idx + 2 * e + 1];
      acc.add(tree.leaf_log_weights[leaf] - params.beta * static_cast<double>(equal));
    }
    vals[s] = (acc.value() - tree.log_normalizer) / n;
  });
  return finish(vals);
}

QuenchedEstimate rsb_upper_bound(const ModelParams& params, int n, const CascadeSpec& spec,
                                 const SpinHierarchySpec& hier, std::int64_t samples, std::uint64_t seed,
                                 const CascadeOptions& opts) {
  return bound_from_cavity(cavity_g1(params, n, spec, hier, samples, seed, opts),
                           cavity_g2(params, n, spec, hier, samples, seed, opts));
}

QuenchedEstimate bound_from_cavity(const QuenchedEstimate& one, const QuenchedEstimate& two) {
  QuenchedEstimate est;
  est.value = one.value - two.value;
  est.stat_error = std::hypot(one.stat_error, two.stat_error);
  est.tail_bound = one.tail_bound + two.tail_bound;
  est.samples = std::max(one.samples, two.samples);
  est.method = (one.method == EstimateMethod::monte_carlo || two.method == EstimateMethod::monte_carlo)
                   ? EstimateMethod::monte_carlo
                   : EstimateMethod::exact_conditional;
  return est;
}

}  // namespace potts_af
