#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "potts_af/potts_af.hpp"

namespace potts_af::cli {

namespace {

double ext(const ExtReal& v) { return v.value(); }

ModelParams params_of(const RunConfig& cfg) {
  ModelParams p{cfg.q, cfg.beta, cfg.c};
  p.validate();
  return p;
}

Document& model_fields(Document& d, const RunConfig& cfg) {
  return d.field("q", std::int64_t{cfg.q}).field("beta", cfg.beta).field("c", cfg.c);
}

Document& estimate_fields(Document& d, const std::string& prefix, const QuenchedEstimate& e) {
  d.field(prefix, e.value);
  d.field(prefix + "_stat_error", e.stat_error);
  d.field(prefix + "_tail_bound", e.tail_bound);
  d.field(prefix + "_method", to_string(e.method));
  d.field(prefix + "_samples", e.samples);
  return d;
}

CascadeSpec parse_spec(const std::string& list, int depth) {
  CascadeSpec spec;
  spec.depth = depth;
  spec.levels.clear();
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
    if (tok.empty()) throw DomainError("empty entry in m-list");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw DomainError("m-list entry is not a number: " + tok);
    }
    if (used != tok.size()) throw DomainError("m-list entry is not a number: " + tok);
    spec.levels.push_back(v);
  }
  if (spec.levels.size() != static_cast<std::size_t>(depth))
    throw DomainError("m-list must have exactly depth entries");
  spec.first = spec.levels.front() == 0.0 ? LimitFlag::to_zero_first : LimitFlag::none;
  spec.last = spec.levels.back() == 1.0 ? LimitFlag::to_one_last : LimitFlag::none;
  spec.validate();
  return spec;
}

SpinHierarchySpec parse_hierarchy(const RunConfig& cfg) {
  if (cfg.hierarchy == "uniform") return SpinHierarchySpec::uniform(cfg.q);
  if (cfg.hierarchy == "symmetric-t") return SpinHierarchySpec::symmetric(cfg.q, cfg.t);
  throw DomainError("hierarchy must be uniform or symmetric-t");
}

CascadePath parse_path(const std::string& s) {
  if (s == "exact") return CascadePath::exact;
  if (s == "sampled") return CascadePath::sampled;
  if (s == "cascade") return CascadePath::cascade;
  throw DomainError("path must be exact, sampled or cascade");
}

}  // namespace

Format default_format(const std::string& command) {
  return command == "phase-diagram" || command == "rs-scan" ? Format::csv : Format::json;
}

Document cmd_phase_diagram(const RunConfig& cfg) {
  require(cfg.q >= 2, "q must be >= 2");
  require(std::isfinite(cfg.c_min) && cfg.c_min >= 0.0, "c-min must be finite and >= 0");
  require(std::isfinite(cfg.c_max) && cfg.c_max >= cfg.c_min, "c-max must be finite and >= c-min");
  require(std::isfinite(cfg.c_step) && cfg.c_step > 0.0, "c-step must be positive");
  const double span = (cfg.c_max - cfg.c_min) / cfg.c_step;
  require(span < 1e6, "phase diagram would exceed 1e6 rows");
  const auto rows = static_cast<std::int64_t>(std::floor(span + 1e-9)) + 1;

  const auto th = thresholds(cfg.q);
  Document d("phase-diagram");
  d.field("status", std::string("ok")).field("q", std::int64_t{cfg.q});
  d.field("c_rs_loc", th.c_rs_loc).field("c_ent", th.c_ent).field("c_1", th.c_1);
  d.columns({"c", "beta_1", "beta_rs_loc", "beta_ent", "beta_upper"});
  for (std::int64_t i = 0; i < rows; ++i) {
    const double c = cfg.c_min + static_cast<double>(i) * cfg.c_step;
    const ExtReal rs = beta_rs_loc(c, cfg.q);
    const ExtReal ent = beta_ent(c, cfg.q);
    d.row({c, ext(beta_1(c, cfg.q)), ext(rs), ext(ent), ext(min(rs, ent))});
  }
  return d;
}

Document cmd_pressure(const RunConfig& cfg) {
  const auto p = params_of(cfg);
  QuenchedEstimate e;
  if (cfg.method == "exact") {
    ConditioningOptions opts;
    opts.seed = cfg.seed;
    opts.mc_paths = cfg.samples;
    e = quenched_pressure_exact(p, cfg.n, cfg.eps, opts);
  } else if (cfg.method == "mc") {
    e = quenched_pressure_mc(p, cfg.n, cfg.samples, cfg.seed);
  } else {
    throw DomainError("method must be exact or mc");
  }
  const double annealed = annealed_pressure(p);
  Document d("pressure");
  d.field("status", std::string("ok"));
  model_fields(d, cfg).field("n", std::int64_t{cfg.n}).field("seed", static_cast<std::int64_t>(cfg.seed));
  d.field("requested_samples", cfg.samples).field("eps", cfg.eps);
  estimate_fields(d, "value", e);
  d.field("annealed", annealed).field("gap", annealed - e.value);
  return d;
}

Document cmd_rs_scan(const RunConfig& cfg) {
  const auto p = params_of(cfg);
  require(std::isfinite(p.beta), "beta must be finite");
  const auto grid = rs_t_grid(p.q, cfg.t_points);
  std::vector<RsEvaluation> evals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) evals[i] = rs_bound(p.beta, p.c, p.q, grid[i], cfg.eps);
  Document d("rs-scan");
  d.field("status", std::string("ok"));
  model_fields(d, cfg).field("t_points", std::int64_t{cfg.t_points}).field("eps", cfg.eps);
  d.field("annealed", annealed_pressure(p));
  d.columns({"t", "g1", "g2", "gap", "rs_bound"});
  std::size_t best = 0;
  double tail = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    d.row({grid[i], evals[i].g1, evals[i].g2, evals[i].gap, evals[i].rs_bound});
    if (evals[i].rs_bound < evals[best].rs_bound) best = i;
    tail = std::max(tail, evals[i].tail_bound);
  }
  d.summary("t_min", grid[best]);
  d.summary("min_rs_bound", evals[best].rs_bound);
  d.summary("max_tail_bound", tail);
  d.summary("instability", instability(p.beta, p.c, p.q));
  return d;
}

Document cmd_second_moment(const RunConfig& cfg) {
  const auto p = params_of(cfg);
  const auto r = optimize(p.beta, p.c, p.q);
  const auto resc = rescale(p.beta, p.q, p.c, r.k_star);
  const auto sym = rescale(p.beta, p.q, p.c, 0.0);
  Document d("second-moment");
  d.field("status", std::string("ok"));
  model_fields(d, cfg);
  d.field("t_star", r.t_star).field("k_star", r.k_star).field("max_gap", r.max_gap);
  d.field("certified", r.certified);
  d.field("C_frak", sym.C_frak).field("K_frak", resc.K_frak);
  d.field("C_frak_threshold", 2.0 * p.q * std::log(static_cast<double>(p.q)));
  d.field("beta_star_certified", ext(beta_star_certified(p.c, p.q)));
  d.field("annealed", annealed_pressure(p));
  return d;
}

Document cmd_sum_rule(const RunConfig& cfg) {
  const auto p = params_of(cfg);
  SumRuleOptions opts;
  opts.conditioning.seed = cfg.seed;
  opts.conditioning.mc_paths = cfg.samples;
  const auto deficit = sum_rule_deficit(p, cfg.n, cfg.r_max, cfg.quad_points, cfg.seed, opts);
  const auto pn = quenched_pressure_exact(p, cfg.n, 1e-9, opts.conditioning);
  const double direct = annealed_pressure(p) - pn.value;
  const double budget = deficit.error(4.0) + pn.error(4.0);
  Document d("sum-rule");
  d.field("status", std::string("ok"));
  model_fields(d, cfg).field("n", std::int64_t{cfg.n}).field("seed", static_cast<std::int64_t>(cfg.seed));
  d.field("r_max", std::int64_t{cfg.r_max}).field("quad_points", std::int64_t{cfg.quad_points});
  d.field("requested_samples", cfg.samples);
  estimate_fields(d, "deficit", deficit);
  estimate_fields(d, "p_n", pn);
  d.field("direct", direct);
  d.field("discrepancy", std::abs(deficit.value - direct));
  d.field("error_budget", budget);
  d.field("within_budget", std::abs(deficit.value - direct) <= budget);
  return d;
}

Document cmd_cascade(const RunConfig& cfg) {
  const auto p = params_of(cfg);
  const auto spec = parse_spec(cfg.m_list, cfg.depth);
  const auto hier = parse_hierarchy(cfg);
  CascadeOptions opts;
  opts.path = parse_path(cfg.path);
  opts.n_atoms = cfg.n_atoms;
  const auto g1 = cavity_g1(p, cfg.n, spec, hier, cfg.samples, cfg.seed, opts);
  const auto g2 = cavity_g2(p, cfg.n, spec, hier, cfg.samples, cfg.seed, opts);
  const auto bound = bound_from_cavity(g1, g2);
  Document d("cascade");
  d.field("status", std::string("ok"));
  model_fields(d, cfg).field("n", std::int64_t{cfg.n}).field("seed", static_cast<std::int64_t>(cfg.seed));
  d.field("depth", std::int64_t{spec.depth}).field("m_list", cfg.m_list);
  d.field("hierarchy", to_string(hier.kind)).field("t", hier.t);
  d.field("path", to_string(opts.path)).field("requested_samples", cfg.samples);
  if (opts.path == CascadePath::cascade) d.field("n_atoms", std::int64_t{cfg.n_atoms});
  estimate_fields(d, "G1", g1);
  estimate_fields(d, "G2", g2);
  estimate_fields(d, "bound", bound);
  d.field("annealed", annealed_pressure(p));
  const bool comparable = std::isfinite(p.beta) && config_count(p.q, cfg.n) <= kDefaultEnumerationBudget;
  d.field("exact_comparison", comparable);
  if (comparable) {
    ConditioningOptions co;
    co.seed = cfg.seed;
    const auto pn = quenched_pressure_exact(p, cfg.n, 1e-6, co);
    estimate_fields(d, "p_n", pn);
    d.field("dominates", bound.value + bound.error() >= pn.value - pn.error());
  }
  return d;
}

CommandResult run_command(const RunConfig& cfg) {
  try {
    if (cfg.command == "phase-diagram") return {cmd_phase_diagram(cfg), true};
    if (cfg.command == "pressure") return {cmd_pressure(cfg), true};
    if (cfg.command == "rs-scan") return {cmd_rs_scan(cfg), true};
    if (cfg.command == "second-moment") return {cmd_second_moment(cfg), true};
    if (cfg.command == "sum-rule") return {cmd_sum_rule(cfg), true};
    if (cfg.command == "cascade") return {cmd_cascade(cfg), true};
    return {error_document(cfg.command, "usage", "unknown command"), false};
  } catch (const BudgetExceeded& e) {
    return {error_document(cfg.command, "budget-exceeded", e.what()), false};
  } catch (const Unsupported& e) {
    return {error_document(cfg.command, "unsupported", e.what()), false};
  } catch (const DomainError& e) {
    return {error_document(cfg.command, "domain-error", e.what()), false};
  } catch (const NumericalFailure& e) {
    return {error_document(cfg.command, "numerical-failure", e.what()), false};
  } catch (const std::exception& e) {
    return {error_document(cfg.command, "error", e.what()), false};
  }
}

}  // namespace potts_af::cli
