#pragma once

#include <vector>

#include "potts_af/ext_real.hpp"

namespace potts_af {

// Probability mass on [q]^2, row-major.
class OverlapMeasure {
 public:
  OverlapMeasure(int q, std::vector<double> mass);
  static OverlapMeasure uniform(int q);

  int q() const { return q_; }
  double at(int r1, int r2) const { return mass_[static_cast<std::size_t>(r1) * q_ + r2]; }
  const std::vector<double>& mass() const { return mass_; }
  bool has_uniform_marginals(double tol = 1e-12) const;

 private:
  int q_;
  std::vector<double> mass_;
};

// s(mu) + (kappa/2) ln(1 - 2(1-e^-beta)/q + (1-e^-beta)^2 sum mu^2), with 0 ln 0 = 0.
double phi2(double beta, double kappa, int q, const OverlapMeasure& mu);

// The restricted family: rows r1 < k uniform, remaining rows put t/q^2 on column 0 and
// (q-t)/((q-1) q^2) elsewhere. Defined for integer k only.
OverlapMeasure mu_kt(int q, int k, double t);

// Phi2(beta, c, q, k, t) - 2P(beta, c, q) in closed form, k real.
double Phi2_gap(double beta, double c, int q, double k, double t);
double Phi2_kt(double beta, double c, int q, double k, double t);

struct Rescaled {
  double C_frak = 0.0;
  double K_frak = 0.0;
};

Rescaled rescale(double beta, int q, double c, double k);

struct SecondMomentResult {
  double t_star = 1.0;
  double k_star = 0.0;
  double max_gap = 0.0;
  bool certified = true;
};

inline constexpr double kCertifyTolerance = 1e-9;

// Maximizes Phi2_gap over [0,q]^2: 401 x 401 grid plus the t = 1 column, then golden-section
// refinement around the best cell. Gaps within 1e-12 of the symmetric value 0 stay at (k, t) = (0, 1).
SecondMomentResult optimize(double beta, double c, int q);

// q = 2 bound on phi2 - 2P in the theta parametrization, linearized through ln(1+u) <= u.
double ising_gap(double beta, double c, double theta);

ExtReal beta_star_certified(double c, int q);

}  // namespace potts_af
