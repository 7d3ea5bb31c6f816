#pragma once

#include <cstdint>
#include <string>

#include "document.hpp"

namespace potts_af::cli {

struct RunConfig {
  std::string command;
  int q = 2;
  double beta = 1.0;
  double c = 1.0;
  int n = 2;
  std::uint64_t seed = 1;
  std::int64_t samples = 2000;

  // phase-diagram
  double c_min = 0.0;
  double c_max = 10.0;
  double c_step = 0.5;

  // pressure: exact | mc
  std::string method = "exact";
  double eps = 1e-7;

  // rs-scan
  int t_points = 201;

  // sum-rule
  int r_max = 20;
  int quad_points = 16;

  // cascade
  int depth = 2;
  std::string m_list = "0,1";
  std::string hierarchy = "symmetric-t";
  double t = 0.0;
  std::string path = "exact";
  int n_atoms = 4096;

  std::string out = "-";
  Format format = Format::json;
  bool format_set = false;
};

Document cmd_phase_diagram(const RunConfig& cfg);
Document cmd_pressure(const RunConfig& cfg);
Document cmd_rs_scan(const RunConfig& cfg);
Document cmd_second_moment(const RunConfig& cfg);
Document cmd_sum_rule(const RunConfig& cfg);
Document cmd_cascade(const RunConfig& cfg);

// Dispatches on cfg.command; library exceptions become a structured error document.
struct CommandResult {
  Document document;
  bool ok = true;
};
CommandResult run_command(const RunConfig& cfg);

// CSV for table-shaped commands, JSON otherwise, unless overridden.
Format default_format(const std::string& command);

}  // namespace potts_af::cli
