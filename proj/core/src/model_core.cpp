#include "potts_af/model_core.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "potts_af/errors.hpp"
#include "potts_af/numeric.hpp"

namespace potts_af {

void ModelParams::validate(bool allow_infinite_beta) const {
  require(q >= 2, "q must be >= 2");
  require(!std::isnan(beta) && beta >= 0.0, "beta must be >= 0");
  require(allow_infinite_beta || std::isfinite(beta), "beta must be finite here");
  require(std::isfinite(c) && c >= 0.0, "c must be finite and >= 0");
}

CouplingMatrix::CouplingMatrix(int n) : n_(n), entries_(static_cast<std::size_t>(n) * n, 0) {
  require(n >= 1, "coupling matrix needs N >= 1");
}

CouplingMatrix::CouplingMatrix(const std::vector<std::vector<int>>& rows)
    : CouplingMatrix(static_cast<int>(rows.size())) {
  for (int i = 0; i < n_; ++i) {
    require(static_cast<int>(rows[i].size()) == n_, "coupling matrix must be square");
    for (int j = 0; j < n_; ++j) set(i, j, rows[i][j]);
  }
}

void CouplingMatrix::set(int i, int j, int v) {
  require(v >= 0, "couplings must be nonnegative");
  entries_[static_cast<std::size_t>(i) * n_ + j] = v;
}

std::int64_t CouplingMatrix::total() const {
  std::int64_t t = 0;
  for (int v : entries_) t += v;
  return t;
}

std::uint64_t config_count(int q, int n) {
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(q))
      return std::numeric_limits<std::uint64_t>::max();
    r *= static_cast<std::uint64_t>(q);
  }
  return r;
}

namespace {

void check_budget(int q, int n, std::uint64_t budget) {
  if (config_count(q, n) > budget)
    throw BudgetExceeded("enumeration of " + std::to_string(q) + "^" + std::to_string(n) +
                         " configurations exceeds budget " + std::to_string(budget));
}

void check_spins(const SpinConfig& s, int n) {
  if (static_cast<int>(s.size()) != n) throw DomainError("spin configuration length does not match N");
}

// Symmetrized off-diagonal weights W_ij = J_ij + J_ji (i != j) and the constant self-loop energy.
struct PairWeights {
  int n;
  std::vector<int> w;
  std::int64_t self = 0;
  explicit PairWeights(const CouplingMatrix& J) : n(J.size()), w(static_cast<std::size_t>(n) * n, 0) {
    for (int i = 0; i < n; ++i) {
      self += J.at(i, i);
      for (int j = 0; j < n; ++j)
        if (i != j) w[static_cast<std::size_t>(i) * n + j] = J.at(i, j) + J.at(j, i);
    }
  }
  int at(int i, int j) const { return w[static_cast<std::size_t>(i) * n + j]; }
};

// Mixed-radix odometer over configurations with the energy maintained incrementally.
template <class F>
void enumerate_with_energy(const CouplingMatrix& J, int q, std::uint64_t budget, F&& visit) {
  const int n = J.size();
  check_budget(q, n, budget);
  const PairWeights pw(J);
  SpinConfig s(n, 0);
  std::int64_t energy = pw.self;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) energy += pw.at(i, j);
  for (;;) {
    visit(s, energy);
    int site = 0;
    for (; site < n; ++site) {
      const int from = s[site];
      const int to = from + 1 == q ? 0 : from + 1;
      std::int64_t delta = 0;
      for (int j = 0; j < n; ++j) {
        if (j == site) continue;
        const int wij = pw.at(site, j);
        if (wij == 0) continue;
        delta += wij * ((s[j] == to) - (s[j] == from));
      }
      s[site] = to;
      energy += delta;
      if (to != 0) break;
    }
    if (site == n) return;
  }
}

}  // namespace

void for_each_config(int n, int q, std::uint64_t budget, const std::function<void(const SpinConfig&)>& fn) {
  check_budget(q, n, budget);
  SpinConfig s(n, 0);
  for (;;) {
    fn(s);
    int site = 0;
    for (; site < n; ++site) {
      if (++s[site] < q) break;
      s[site] = 0;
    }
    if (site == n) return;
  }
}

void for_each_config_energy(const CouplingMatrix& J, int q, std::uint64_t budget,
                            const std::function<void(const SpinConfig&, std::int64_t)>& fn) {
  enumerate_with_energy(J, q, budget, fn);
}

std::int64_t hamiltonian(const SpinConfig& sigma, const CouplingMatrix& J) {
  check_spins(sigma, J.size());
  std::int64_t h = 0;
  for (int i = 0; i < J.size(); ++i)
    for (int j = 0; j < J.size(); ++j)
      if (sigma[i] == sigma[j]) h += J.at(i, j);
  return h;
}

std::vector<double> energy_histogram(const CouplingMatrix& J, int q, std::uint64_t budget) {
  require(q >= 2, "q must be >= 2");
  std::vector<double> hist(static_cast<std::size_t>(J.total()) + 1, 0.0);
  enumerate_with_energy(J, q, budget, [&](const SpinConfig&, std::int64_t e) { hist[e] += 1.0; });
  return hist;
}

namespace {

double log_partition_from_histogram(const std::vector<double>& hist, double beta) {
  LogSumExp acc;
  for (std::size_t e = 0; e < hist.size(); ++e)
    if (hist[e] > 0) acc.add(-beta * static_cast<double>(e), hist[e]);
  return acc.value();
}

void check_beta(double beta, bool allow_inf) {
  require(!std::isnan(beta) && beta >= 0.0, "beta must be >= 0");
  require(allow_inf || std::isfinite(beta), "beta = inf is not accepted by this operation");
}

}  // namespace

double log_partition(const CouplingMatrix& J, int q, double beta, std::uint64_t budget) {
  check_beta(beta, false);
  return log_partition_from_histogram(energy_histogram(J, q, budget), beta);
}

double pressure_density(const CouplingMatrix& J, int q, double beta, std::uint64_t budget) {
  return log_partition(J, q, beta, budget) / J.size();
}

double entropy_density(const CouplingMatrix& J, int q, double beta, std::uint64_t budget) {
  check_beta(beta, true);
  const auto hist = energy_histogram(J, q, budget);
  const double n = J.size();
  if (std::isinf(beta)) {
    for (double h : hist)
      if (h > 0) return std::log(h) / n;
  }
  const double log_z = log_partition_from_histogram(hist, beta);
  double s = 0.0;
  for (std::size_t e = 0; e < hist.size(); ++e) {
    if (hist[e] == 0) continue;
    const double log_w = -beta * static_cast<double>(e) - log_z;
    s -= hist[e] * std::exp(log_w) * log_w;
  }
  return std::max(0.0, s / n);
}

double empirical_measure(const ReplicaBundle& bundle, std::span<const int> s) {
  require(!bundle.empty(), "replica bundle must hold at least one replica");
  if (s.size() != bundle.size()) throw DomainError("pattern length must equal the number of replicas");
  const std::size_t n = bundle.front().size();
  for (const auto& r : bundle)
    if (r.size() != n) throw DomainError("replicas must have equal length");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool all = true;
    for (std::size_t r = 0; r < bundle.size() && all; ++r) all = bundle[r][i] == s[r];
    hits += all;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

double gibbs_replica_expectation(const CouplingMatrix& J, int q, double beta, int R, const ReplicaObservable& f,
                                 std::uint64_t budget) {
  check_beta(beta, false);
  require(R >= 1, "R must be >= 1");
  const int n = J.size();
  if (config_count(q, n * R) > budget)
    throw BudgetExceeded("replica enumeration q^(N R) exceeds budget");
  // single-replica Gibbs weights, indexed in odometer order
  std::vector<double> log_w;
  log_w.reserve(config_count(q, n));
  enumerate_with_energy(J, q, budget, [&](const SpinConfig&, std::int64_t e) { log_w.push_back(-beta * e); });
  const double log_z = log_sum_exp(log_w);
  std::vector<SpinConfig> configs;
  configs.reserve(log_w.size());
  for_each_config(n, q, budget, [&](const SpinConfig& s) { configs.push_back(s); });

  ReplicaBundle bundle(R, SpinConfig(n, 0));
  std::vector<std::size_t> idx(R, 0);
  double acc = 0.0;
  for (;;) {
    double lw = 0.0;
    for (int r = 0; r < R; ++r) {
      bundle[r] = configs[idx[r]];
      lw += log_w[idx[r]] - log_z;
    }
    acc += std::exp(lw) * f(bundle);
    int r = 0;
    for (; r < R; ++r) {
      if (++idx[r] < configs.size()) break;
      idx[r] = 0;
    }
    if (r == R) break;
  }
  return acc;
}

std::vector<double> two_point_function(const CouplingMatrix& J, int q, double beta, std::uint64_t budget) {
  check_beta(beta, false);
  const int n = J.size();
  std::vector<double> log_w;
  std::vector<SpinConfig> configs;
  enumerate_with_energy(J, q, budget, [&](const SpinConfig& s, std::int64_t e) {
    log_w.push_back(-beta * e);
    configs.push_back(s);
  });
  const double log_z = log_sum_exp(log_w);
  std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const double w = std::exp(log_w[c] - log_z);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (configs[c][i] == configs[c][j]) out[static_cast<std::size_t>(i) * n + j] += w;
  }
  return out;
}

}  // namespace potts_af
