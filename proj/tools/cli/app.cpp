#include "app.hpp"

#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"

namespace potts_af::cli {

namespace {

// --config reader: keys are long flag names; a "command" key (or a nested object keyed by
// the command name) selects the subcommand.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const CLI::App* sub : app->get_subcommands()) {
      j["command"] = sub->get_name();
      for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
        const auto& res = opt->results();
        if (!res.empty())
          j[opt->get_lnames().front()] = res.front();
        else if (default_also && !opt->get_default_str().empty())
          j[opt->get_lnames().front()] = opt->get_default_str();
      }
    }
    return j.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(input);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    std::vector<std::string> parents;
    if (j.contains("command")) {
      if (!j["command"].is_string()) throw CLI::ConversionError("config \"command\" must be a string");
      parents.push_back(j["command"].get<std::string>());
      items.push_back({parents, "++", {}});
    }
    for (const auto& [key, value] : j.items()) {
      if (key == "command" || key == "schema") continue;
      if (value.is_object()) {
        items.push_back({{key}, "++", {}});
        for (const auto& [k2, v2] : value.items()) items.push_back({{key}, flag_name(k2), {scalar(v2)}});
        continue;
      }
      items.push_back({parents, flag_name(key), {scalar(value)}});
    }
    return items;
  }

 private:
  static std::string flag_name(std::string key) {
    for (char& ch : key)
      if (ch == '_') ch = '-';
    return key;
  }

  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    if (v.is_array()) {
      std::string out;
      for (const auto& e : v) out += (out.empty() ? "" : ",") + scalar(e);
      return out;
    }
    throw CLI::ConversionError("unsupported config value: " + v.dump());
  }
};

void add_model(CLI::App* sub, RunConfig& cfg, bool with_n) {
  sub->add_option("--q", cfg.q, "number of colors")->capture_default_str();
  sub->add_option("--beta", cfg.beta, "inverse temperature")->capture_default_str();
  sub->add_option("--c", cfg.c, "connectivity")->capture_default_str();
  if (with_n) sub->add_option("--n", cfg.n, "system size")->capture_default_str();
}

void add_stochastic(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--samples", cfg.samples, "Monte Carlo samples")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "64-bit seed")->capture_default_str();
}

void add_output(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--out", cfg.out, "output path, - for stdout")->capture_default_str();
  sub->add_option_function<std::string>(
         "--format",
         [&cfg](const std::string& f) {
           cfg.format = f == "csv" ? Format::csv : Format::json;
           cfg.format_set = true;
         },
         "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

bool write_output(const RunConfig& cfg, const std::string& text, std::ostream& out, std::ostream& err) {
  if (cfg.out == "-" || cfg.out.empty()) {
    out << text;
    return true;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (f) f << text;
  if (!f) {
    err << "cannot write " << cfg.out << "\n";
    return false;
  }
  return true;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app("Diluted antiferromagnetic Potts model: bounds, estimators and diagnostics", "potts_af");
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON run configuration (keys are long flag names)");
  app.require_subcommand(0, 1);

  auto* phase = app.add_subcommand("phase-diagram", "phase boundaries over a range of c (CSV)");
  phase->add_option("--q", cfg.q, "number of colors")->capture_default_str();
  phase->add_option("--c-min", cfg.c_min)->capture_default_str();
  phase->add_option("--c-max", cfg.c_max)->capture_default_str();
  phase->add_option("--c-step", cfg.c_step)->capture_default_str();
  add_output(phase, cfg);

  auto* pressure = app.add_subcommand("pressure", "quenched pressure p_N by conditioning or Monte Carlo");
  add_model(pressure, cfg, true);
  add_stochastic(pressure, cfg);
  pressure->add_option("--method", cfg.method, "exact or mc")->check(CLI::IsMember({"exact", "mc"}))
      ->capture_default_str();
  pressure->add_option("--eps", cfg.eps, "degree truncation tolerance")->capture_default_str();
  add_output(pressure, cfg);

  auto* rs = app.add_subcommand("rs-scan", "replica-symmetric bound over the t grid (CSV)");
  add_model(rs, cfg, false);
  rs->add_option("--t-points", cfg.t_points)->capture_default_str();
  rs->add_option("--eps", cfg.eps, "g1 truncation tolerance")->capture_default_str();
  add_output(rs, cfg);

  auto* sm = app.add_subcommand("second-moment", "second-moment certification");
  add_model(sm, cfg, false);
  add_output(sm, cfg);

  auto* sr = app.add_subcommand("sum-rule", "sum-rule deficit against the direct annealed gap");
  add_model(sr, cfg, true);
  add_stochastic(sr, cfg);
  sr->add_option("--r-max", cfg.r_max)->capture_default_str();
  sr->add_option("--quad-points", cfg.quad_points)->capture_default_str();
  add_output(sr, cfg);

  auto* cas = app.add_subcommand("cascade", "cavity functionals and the RSB upper bound");
  add_model(cas, cfg, true);
  add_stochastic(cas, cfg);
  cas->add_option("--depth", cfg.depth)->capture_default_str();
  cas->add_option("--m-list", cfg.m_list, "comma-separated levels; a leading 0 / trailing 1 take the limits")
      ->capture_default_str();
  cas->add_option("--hierarchy", cfg.hierarchy)->check(CLI::IsMember({"uniform", "symmetric-t"}))
      ->capture_default_str();
  cas->add_option("--t", cfg.t)->capture_default_str();
  cas->add_option("--path", cfg.path)->check(CLI::IsMember({"exact", "sampled", "cascade"}))->capture_default_str();
  cas->add_option("--n-atoms", cfg.n_atoms)->capture_default_str();
  add_output(cas, cfg);

  for (auto* sub : app.get_subcommands({})) sub->configurable();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    out << error_document("", "usage", e.what()).render(Format::json);
    return 2;
  }

  for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  if (cfg.command.empty()) {
    err << app.help();
    out << error_document("", "usage", "a command is required").render(Format::json);
    return 2;
  }
  if (!cfg.format_set) cfg.format = default_format(cfg.command);

  const auto result = run_command(cfg);
  std::string text;
  try {
    text = result.document.render(cfg.format);
  } catch (const std::exception& e) {
    out << error_document(cfg.command, "serialization", e.what()).render(Format::json);
    return 1;
  }
  if (!write_output(cfg, text, out, err)) {
    out << error_document(cfg.command, "io", "cannot write " + cfg.out).render(Format::json);
    return 1;
  }
  if (!result.ok) err << "potts_af: " << cfg.command << " failed\n";
  return result.ok ? 0 : 1;
}

}  // namespace potts_af::cli
