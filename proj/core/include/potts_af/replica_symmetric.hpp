#pragma once

#include <vector>

namespace potts_af {

struct RsEvaluation {
  double g1 = 0.0;
  double g2 = 0.0;
  double gap = 0.0;       // g1 - g2
  double rs_bound = 0.0;  // annealed pressure + gap
  int k_truncation = 0;
  double tail_bound = 0.0;
};

// (c/2q) [(q-1) ln(1 + x t^2) + ln(1 - (q-1) x t^2)]
double g2(double beta, double c, int q, double t);

struct G1Value {
  double value = 0.0;
  double tail = 0.0;
  int k_truncation = 0;
};

// sum_k pi_c(k) E_tau ln( q^-1 sum_s prod_i (1 - x t (q delta(tau_i, s) - 1)) ), with the tau
// expectation reduced to color-count compositions. k is truncated once the certified tail is below eps.
G1Value g1(double beta, double c, int q, double t, double eps, double composition_budget = 2e7);

RsEvaluation rs_bound(double beta, double c, int q, double t, double eps);

// c x^2 > 1
bool instability(double beta, double c, int q);

struct QuarticCoefficients {
  double a1 = 0.0;
  double a2 = 0.0;
  double ref1 = 0.0;  // -(q-1) c^2 x^4 / 4
  double ref2 = 0.0;  // -(q-1) c x^2 / 4
};

// t^4 coefficients of g1 and g2 from an even five-point stencil at h = 0.05 with one Richardson step.
QuarticCoefficients quartic_coefficients(double beta, double c, int q, double eps = 1e-13);

// Uniform grid on [-1/(q-1), 1].
std::vector<double> rs_t_grid(int q, int points = 201);

}  // namespace potts_af
