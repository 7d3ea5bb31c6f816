#include "potts_af/second_moment.hpp"

#include <cmath>

#include "potts_af/analytic_bounds.hpp"
#include "potts_af/errors.hpp"
#include "potts_af/parallel.hpp"

namespace potts_af {

namespace {

double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

}  // namespace

OverlapMeasure::OverlapMeasure(int q, std::vector<double> mass) : q_(q), mass_(std::move(mass)) {
  require(q >= 2, "q must be >= 2");
  require(mass_.size() == static_cast<std::size_t>(q) * q, "overlap measure needs q*q cells");
  double total = 0.0;
  for (double m : mass_) {
    require(m >= 0.0 && std::isfinite(m), "overlap masses must be finite and nonnegative");
    total += m;
  }
  require(std::abs(total - 1.0) <= 1e-12, "overlap masses must sum to 1");
}

OverlapMeasure OverlapMeasure::uniform(int q) {
  return OverlapMeasure(q, std::vector<double>(static_cast<std::size_t>(q) * q, 1.0 / (static_cast<double>(q) * q)));
}

bool OverlapMeasure::has_uniform_marginals(double tol) const {
  for (int r = 0; r < q_; ++r) {
    double row = 0.0, col = 0.0;
    for (int s = 0; s < q_; ++s) {
      row += at(r, s);
      col += at(s, r);
    }
    if (std::abs(row - 1.0 / q_) > tol || std::abs(col - 1.0 / q_) > tol) return false;
  }
  return true;
}

double phi2(double beta, double kappa, int q, const OverlapMeasure& mu) {
  require(mu.q() == q, "overlap measure has the wrong q");
  require(!std::isnan(beta) && beta >= 0.0, "beta must be >= 0");
  require(std::isfinite(kappa) && kappa >= 0.0, "kappa must be finite and >= 0");
  const double a = -std::expm1(-beta);
  double entropy = 0.0;
  double sq = 0.0;
  for (double m : mu.mass()) {
    entropy -= xlogx(m);
    sq += m * m;
  }
  return entropy + 0.5 * kappa * std::log(1.0 - 2.0 * a / q + a * a * sq);
}

OverlapMeasure mu_kt(int q, int k, double t) {
  require(q >= 2, "q must be >= 2");
  require(k >= 0 && k <= q, "k must lie in {0, ..., q}");
  require(t >= 0.0 && t <= q, "t must lie in [0, q]");
  const double q2 = static_cast<double>(q) * q;
  std::vector<double> mass(static_cast<std::size_t>(q) * q);
  for (int r1 = 0; r1 < q; ++r1)
    for (int r2 = 0; r2 < q; ++r2) {
      double v;
      if (r1 < k)
        v = 1.0 / q2;
      else if (r2 == 0)
        v = t / q2;
      else
        v = (q - t) / (q - 1.0) / q2;
      mass[static_cast<std::size_t>(r1) * q + r2] = v;
    }
  return OverlapMeasure(q, std::move(mass));
}

double Phi2_gap(double beta, double c, int q, double k, double t) {
  require(q >= 2, "q must be >= 2");
  require(k >= 0.0 && k <= q, "k must lie in [0, q]");
  require(t >= 0.0 && t <= q, "t must lie in [0, q]");
  require(std::isfinite(c) && c >= 0.0, "c must be finite and >= 0");
  const double x = x_param(beta, q);
  const double rest = q - k;
  const double energy = 0.5 * c * std::log1p(x * x * rest * (t - 1.0) * (t - 1.0) / (q * (q - 1.0)));
  const double tail = q - t;
  const double ent = xlogx(t) + (tail > 0.0 ? tail * std::log(tail / (q - 1.0)) : 0.0);
  return energy - rest * ent / (static_cast<double>(q) * q);
}

double Phi2_kt(double beta, double c, int q, double k, double t) {
  return 2.0 * annealed_pressure(beta, c, q) + Phi2_gap(beta, c, q, k, t);
}

Rescaled rescale(double beta, int q, double c, double k) {
  require(q >= 2, "q must be >= 2");
  const double x = x_param(beta, q);
  const double s = x * x * q * q;
  return {s * c, q - s * (q - k)};
}

SecondMomentResult optimize(double beta, double c, int q) {
  require(q >= 2, "q must be >= 2");
  constexpr int kGrid = 401;
  constexpr double kTie = 1e-12;
  std::vector<double> ts(kGrid);
  for (int i = 0; i < kGrid; ++i) ts[i] = q * static_cast<double>(i) / (kGrid - 1);
  ts.push_back(1.0);
  const std::size_t nt = ts.size();
  std::vector<double> vals(static_cast<std::size_t>(kGrid) * nt);
  parallel_for(kGrid, [&](std::size_t ik) {
    const double k = q * static_cast<double>(ik) / (kGrid - 1);
    for (std::size_t it = 0; it < nt; ++it) vals[ik * nt + it] = Phi2_gap(beta, c, q, k, ts[it]);
  });
  SecondMomentResult best;
  best.k_star = 0.0;
  best.t_star = 1.0;
  best.max_gap = 0.0;
  for (int ik = 0; ik < kGrid; ++ik) {
    const double k = q * static_cast<double>(ik) / (kGrid - 1);
    for (std::size_t it = 0; it < nt; ++it) {
      const double v = vals[ik * nt + it];
      if (v > best.max_gap + kTie) {
        best.max_gap = v;
        best.k_star = k;
        best.t_star = ts[it];
      }
    }
  }
  if (best.max_gap > kTie) {
    const double step = q / static_cast<double>(kGrid - 1);
    auto golden = [](auto&& f, double lo, double hi) {
      const double g = (std::sqrt(5.0) - 1.0) / 2.0;
      double a = lo, b = hi;
      double x1 = b - g * (b - a), x2 = a + g * (b - a);
      double f1 = f(x1), f2 = f(x2);
      for (int i = 0; i < 80; ++i) {
        if (f1 < f2) {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + g * (b - a);
          f2 = f(x2);
        } else {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - g * (b - a);
          f1 = f(x1);
        }
      }
      return 0.5 * (a + b);
    };
    for (int round = 0; round < 4; ++round) {
      const double t_new = golden([&](double t) { return Phi2_gap(beta, c, q, best.k_star, t); },
                                  std::max(0.0, best.t_star - step), std::min<double>(q, best.t_star + step));
      const double vt = Phi2_gap(beta, c, q, best.k_star, t_new);
      if (vt > best.max_gap) {
        best.max_gap = vt;
        best.t_star = t_new;
      }
      const double k_new = golden([&](double k) { return Phi2_gap(beta, c, q, k, best.t_star); },
                                  std::max(0.0, best.k_star - step), std::min<double>(q, best.k_star + step));
      const double vk = Phi2_gap(beta, c, q, k_new, best.t_star);
      if (vk > best.max_gap) {
        best.max_gap = vk;
        best.k_star = k_new;
      }
    }
  }
  best.certified = best.max_gap <= kCertifyTolerance;
  return best;
}

double ising_gap(double beta, double c, double theta) {
  require(theta >= 0.0 && theta <= 1.0, "theta must lie in [0, 1]");
  const double x = x_param(beta, 2);
  const double ent = -xlogx(theta) - xlogx(1.0 - theta) - std::log(2.0);
  const double d = 2.0 * theta - 1.0;
  return ent + 0.5 * c * x * x * d * d;
}

ExtReal beta_star_certified(double c, int q) {
  require(q >= 2, "q must be >= 2");
  return q == 2 ? beta_rs_loc(c, 2) : beta_1(c, q);
}

}  // namespace potts_af
