#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "potts_af/disorder.hpp"
#include "potts_af/model_core.hpp"
#include "potts_af/numeric.hpp"

namespace potts_af {

enum class LimitFlag { none, to_zero_first, to_one_last };

struct CascadeSpec {
  int depth = 1;
  // m_1 < ... < m_L in (0, 1); an entry under an endpoint flag is ignored.
  std::vector<double> levels{1.0};
  LimitFlag first = LimitFlag::none;
  LimitFlag last = LimitFlag::to_one_last;

  bool first_to_zero() const { return first == LimitFlag::to_zero_first; }
  bool last_to_one() const { return last == LimitFlag::to_one_last; }
  // m_l with the flags resolved to 0 or 1.
  double level(int l) const;
  void validate() const;

  static CascadeSpec annealed();           // L = 1, m -> 1
  static CascadeSpec replica_symmetric();  // L = 2, m_1 -> 0, m_2 -> 1
};

struct AtomSet {
  std::vector<double> atoms;  // descending
  double tail_mass_bound = 0.0;
};

AtomSet sample_pd_atoms(double m, int n_atoms, std::uint64_t seed);

// Log-weights of the leaves of a truncated Ruelle cascade with `branching[l]` atoms per node at level l.
struct CascadeTree {
  std::vector<double> leaf_log_weights;
  double log_normalizer = 0.0;
  double tail_fraction = 0.0;  // estimated relative mass lost to truncation
};

CascadeTree sample_cascade(const CascadeSpec& spec, const std::vector<int>& branching, std::uint64_t seed);

enum class MultiplierLaw { log_normal, constant_one };

struct StabilityOptions {
  MultiplierLaw law = MultiplierLaw::log_normal;
  // Multiplies the closed-form c; anything but 1 should make the test fail.
  double c_scale = 1.0;
};

struct StabilityReport {
  double statistic = 0.0;
  double p_value = 1.0;
  double c_factor = 1.0;
  int draws = 0;
  bool passed = false;
};

inline constexpr double kStabilityAlpha = 1e-3;

// Two-sample KS on ln(x1 x2 x3) of the three largest atoms of {X_k xi_k} versus {c xi_k}.
StabilityReport stability_test(double m, int n_atoms, int draws, std::uint64_t seed,
                               const StabilityOptions& opts = {});

// Empirical E[exp(-lambda sum_k xi_k^p)] over truncated PD(m) atom sets.
MeanError laplace_functional(double m, double p, double lambda, int n_atoms, int draws, std::uint64_t seed);

struct SpinHierarchySpec {
  enum class Kind { uniform, symmetric_t };
  Kind kind = Kind::uniform;
  double t = 0.0;
  int q = 2;

  void validate() const;
  static SpinHierarchySpec uniform(int q) { return {Kind::uniform, 0.0, q}; }
  static SpinHierarchySpec symmetric(int q, double t) { return {Kind::symmetric_t, t, q}; }
};

std::string to_string(SpinHierarchySpec::Kind k);

enum class CascadePath {
  exact,    // Poisson sum over site degrees with closed-form conditional expectations
  sampled,  // Monte Carlo over the index set and the m -> 0 level, closed-form inner expectations
  cascade,  // Monte Carlo over an explicit truncated cascade
};

std::string to_string(CascadePath p);

struct CascadeOptions {
  CascadePath path = CascadePath::exact;
  int n_atoms = 4096;
  double eps = 1e-12;
  // caps the per-site composition work of finite-m leaf levels
  double work_budget = 5e8;
};

QuenchedEstimate cavity_g1(const ModelParams& params, int n, const CascadeSpec& spec, const SpinHierarchySpec& hier,
                           std::int64_t samples, std::uint64_t seed, const CascadeOptions& opts = {});
QuenchedEstimate cavity_g2(const ModelParams& params, int n, const CascadeSpec& spec, const SpinHierarchySpec& hier,
                           std::int64_t samples, std::uint64_t seed, const CascadeOptions& opts = {});

// G1 - G2; standard errors add in quadrature and tails add.
QuenchedEstimate bound_from_cavity(const QuenchedEstimate& g1, const QuenchedEstimate& g2);
QuenchedEstimate rsb_upper_bound(const ModelParams& params, int n, const CascadeSpec& spec,
                                 const SpinHierarchySpec& hier, std::int64_t samples, std::uint64_t seed,
                                 const CascadeOptions& opts = {});

}  // namespace potts_af
