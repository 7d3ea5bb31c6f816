#pragma once

#include <string>

#include "potts_af/ext_real.hpp"
#include "potts_af/model_core.hpp"

namespace potts_af {

// ln q + (c/2) ln(1 - (1 - e^-beta)/q); beta = +inf allowed.
double annealed_pressure(double beta, double c, int q);
double annealed_pressure(const ModelParams& p);

// (1 - e^-beta) / (q - 1 + e^-beta), in [0, 1/(q-1)].
double x_param(double beta, int q);

struct PhaseThresholds {
  double c_rs_loc = 0.0;
  double c_ent = 0.0;
  double c_1 = 0.0;
};

PhaseThresholds thresholds(int q);

ExtReal beta_rs_loc(double c, int q);
ExtReal beta_1(double c, int q);

// Entropy of the annealed system, P - beta dP/dbeta. beta_ent is the first beta where it turns negative.
double annealed_entropy(double beta, double c, int q);
ExtReal beta_ent(double c, int q);

enum class PhaseLabel { annealed_certified, gap_unknown, non_annealed };
std::string to_string(PhaseLabel label);

struct PhaseRegion {
  PhaseLabel label = PhaseLabel::annealed_certified;
  ExtReal beta_lower;
  ExtReal beta_upper;
};

PhaseRegion classify(const ModelParams& p);

}  // namespace potts_af
