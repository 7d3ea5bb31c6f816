#include "potts_af/analytic_bounds.hpp"

#include <cmath>

#include "potts_af/errors.hpp"

namespace potts_af {

namespace {

void check_q(int q) { require(q >= 2, "q must be >= 2"); }
void check_c(double c) { require(std::isfinite(c) && c >= 0.0, "c must be finite and >= 0"); }
void check_beta(double beta) { require(!std::isnan(beta) && beta >= 0.0, "beta must be >= 0"); }

}  // namespace

double annealed_pressure(double beta, double c, int q) {
  check_q(q);
  check_c(c);
  check_beta(beta);
  if (c == 0.0) return std::log(q);
  return std::log(q) + 0.5 * c * std::log1p(std::expm1(-beta) / q);
}

double annealed_pressure(const ModelParams& p) { return annealed_pressure(p.beta, p.c, p.q); }

double x_param(double beta, int q) {
  check_q(q);
  check_beta(beta);
  const double e = std::exp(-beta);
  return -std::expm1(-beta) / (q - 1 + e);
}

PhaseThresholds thresholds(int q) {
  check_q(q);
  PhaseThresholds t;
  t.c_rs_loc = static_cast<double>(q - 1) * (q - 1);
  t.c_ent = 2.0 * std::log(q) / std::abs(std::log1p(-1.0 / q));
  t.c_1 = 2.0 * q * std::log(q);
  return t;
}

ExtReal beta_rs_loc(double c, int q) {
  check_q(q);
  check_c(c);
  if (c <= static_cast<double>(q - 1) * (q - 1)) return ExtReal::infinity();
  return -std::log1p(-q / (1.0 + std::sqrt(c)));
}

ExtReal beta_1(double c, int q) {
  check_q(q);
  check_c(c);
  if (q == 2) return beta_rs_loc(c, 2);
  const double c1 = 2.0 * q * std::log(q);
  if (c <= c1) return ExtReal::infinity();
  return -std::log1p(-q / (q - 1 + std::sqrt(c / c1)));
}

double annealed_entropy(double beta, double c, int q) {
  const double e = std::exp(-beta);
  const double slope = std::isinf(beta) ? 0.0 : 0.5 * beta * c * e / (q - 1 + e);
  return annealed_pressure(beta, c, q) + slope;
}

ExtReal beta_ent(double c, int q) {
  check_q(q);
  check_c(c);
  if (c <= thresholds(q).c_ent) return ExtReal::infinity();
  double lo = 0.0;
  double hi = 1e-3;
  while (annealed_entropy(hi, c, q) >= 0.0) {
    lo = hi;
    hi *= 1.5;
    if (hi > 500.0) {
      if (annealed_entropy(500.0, c, q) >= 0.0)
        throw NumericalFailure("beta_ent: no sign change of the annealed entropy in (0, 500]");
      hi = 500.0;
    }
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (annealed_entropy(mid, c, q) >= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::string to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::annealed_certified:
      return "annealed-certified";
    case PhaseLabel::gap_unknown:
      return "gap-unknown";
    case PhaseLabel::non_annealed:
      return "non-annealed";
  }
  return "unknown";
}

PhaseRegion classify(const ModelParams& p) {
  p.validate(true);
  PhaseRegion r;
  r.beta_upper = min(beta_rs_loc(p.c, p.q), beta_ent(p.c, p.q));
  r.beta_lower = min(beta_1(p.c, p.q), r.beta_upper);
  const ExtReal b(p.beta);
  if (b > r.beta_upper)
    r.label = PhaseLabel::non_annealed;
  else if (b <= r.beta_lower)
    r.label = PhaseLabel::annealed_certified;
  else
    r.label = PhaseLabel::gap_unknown;
  return r;
}

}  // namespace potts_af
