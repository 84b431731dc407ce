#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "presto/config.hpp"
#include "presto/errors.hpp"
#include "presto/harness.hpp"
#include "presto/plant.hpp"
#include "presto/report.hpp"
#include "presto/scenario.hpp"
#include "presto/tuner.hpp"

namespace fs = std::filesystem;
using namespace presto;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kDiverged = 2;

/// A compare config lists scenario files; any other config is a scenario.
std::vector<Scenario> scenarios_from(const fs::path& path) {
  const Config cfg = Config::load(path);
  if (!cfg.has_section("compare")) return {load_scenario(cfg)};
  std::vector<Scenario> out;
  for (const auto& item : cfg.get_strings("compare", "scenarios")) out.push_back(load_scenario(cfg.resolve(item)));
  if (out.empty()) throw ConfigError(fmt::format("{}: [compare] scenarios is empty", path.string()));
  return out;
}

int cmd_simulate(const fs::path& config, const fs::path& out_dir) {
  const Scenario sc = load_scenario(config);
  RunResult r = run_scenario(sc);
  fs::create_directories(out_dir);
  r.report.trace_path = out_dir / (sc.name + ".csv");
  export_trace(r.trace, r.report.trace_path);
  write_text_file(out_dir / (sc.name + "_report.txt"), format_run_text(r.report));
  write_text_file(out_dir / (sc.name + "_report.csv"), format_run_csv(r.report));
  std::cout << format_run_text(r.report);
  if (r.report.diverged) {
    std::cerr << fmt::format("error: {} diverged at t = {}\n", sc.name, r.report.diverged_at);
    return kDiverged;
  }
  return kOk;
}

int cmd_compare(const std::vector<fs::path>& configs, const fs::path& out_dir) {
  std::vector<Scenario> all;
  for (const auto& c : configs)
    for (auto& s : scenarios_from(c)) all.push_back(std::move(s));
  const Comparison cmp = compare_controllers(all, out_dir / "traces");
  const std::string text = format_comparison_text(cmp);
  write_text_file(out_dir / "comparison.txt", text);
  write_text_file(out_dir / "comparison.csv", format_comparison_csv(cmp));
  std::cout << text;
  int rc = kOk;
  for (const auto& r : cmp.rows)
    if (r.diverged) {
      std::cerr << fmt::format("error: {} diverged at t = {}\n", r.name, r.diverged_at);
      rc = kDiverged;
    }
  return rc;
}

int cmd_tune(const fs::path& config, const fs::path& out_dir) {
  const TuneJob job = load_tune_job(Config::load(config));
  const Fitness fitness = [&job](std::span<const double> v) { return fitness_settling_time(v, job.base, job.gains); };
  const PsoResult res = pso_run(fitness, job.pso);

  std::string report = fmt::format("scenario     {}\nswarm        {}\ngenerations  {}\nseed         {}\n", job.base.name,
                                   job.pso.swarm_size, job.pso.max_generations, job.pso.seed);
  for (std::size_t i = 0; i < job.gains.size(); ++i)
    report += fmt::format("{:<12} {:.10g}\n", to_string(job.gains[i]), res.best_position[i]);
  report += fmt::format("best cost    {:.10g}\n", res.best_cost);

  std::string history = "generation,best_cost\n";
  for (std::size_t g = 0; g < res.history.size(); ++g) history += fmt::format("{},{:.17g}\n", g, res.history[g]);

  write_text_file(out_dir / (job.base.name + "_tune.txt"), report);
  write_text_file(out_dir / (job.base.name + "_tune_history.csv"), history);
  std::cout << report;
  return kOk;
}

int cmd_coeffs(const fs::path& config) {
  const Config cfg = Config::load(config);
  BeamParams bp;
  bp.alpha = cfg.get_double("beam", "alpha");
  bp.beta = cfg.get_double("beam", "beta");
  bp.lambda = cfg.get_double("beam", "lambda");
  bp.quadrature_points = static_cast<int>(cfg.get_int("beam", "quadrature_points", bp.quadrature_points));
  try {
    bp.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  std::cout << fmt::format("alpha = {:.10g}  beta = {:.10g}  lambda = {:.10g}\n", bp.alpha, bp.beta, bp.lambda);
  for (MassTerm m : {MassTerm::slope_squared, MassTerm::phi_squared}) {
    const PlantParams pp = galerkin_coefficients(bp, m);
    std::cout << fmt::format("{:<14} K1 = {:.12g}  K2 = {:.12g}  g = {:.12g}\n", to_string(m), pp.K1, pp.K2, pp.g);
  }
  return kOk;
}

int cmd_validate(const fs::path& config) {
  const Config cfg = Config::load(config);
  if (cfg.has_section("tune")) {
    const TuneJob job = load_tune_job(cfg);
    std::cout << fmt::format("ok: tuning job on {} over {} gains\n", job.base.name, job.gains.size());
  } else if (cfg.has_section("compare") || cfg.has_section("scenario")) {
    for (const auto& sc : scenarios_from(config)) std::cout << fmt::format("ok: {} ({})\n", sc.name, to_string(sc.kind));
  } else if (cfg.has_section("beam")) {
    return cmd_coeffs(config);
  } else {
    throw ConfigError(fmt::format("{}: nothing to validate (no [scenario], [compare], [tune] or [beam])", config.string()));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"presto: finite-time observer and terminal sliding-mode control of a nanobeam"};
  app.require_subcommand(1);

  std::string sim_config, tune_config, coeffs_config, validate_config;
  std::vector<std::string> compare_configs;
  std::string sim_out = "out", compare_out = "out", tune_out = "out";

  auto* sim = app.add_subcommand("simulate", "run one scenario and write its trace and report");
  sim->add_option("config", sim_config, "scenario config")->required();
  sim->add_option("--out", sim_out, "output directory");

  auto* cmp = app.add_subcommand("compare", "run several scenarios and write the comparison table");
  cmp->add_option("config", compare_configs, "scenario or compare configs")->required();
  cmp->add_option("--out", compare_out, "output directory");

  auto* tune = app.add_subcommand("tune", "tune gains by particle swarm search");
  tune->add_option("config", tune_config, "tuning config")->required();
  tune->add_option("--out", tune_out, "output directory");

  auto* coeffs = app.add_subcommand("coeffs", "reduced-model coefficients from beam parameters");
  coeffs->add_option("config", coeffs_config, "beam config")->required();

  auto* val = app.add_subcommand("validate", "check a config without running it");
  val->add_option("config", validate_config, "config to check")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kConfigError;
  }

  try {
    if (*sim) return cmd_simulate(sim_config, sim_out);
    if (*cmp) {
      std::vector<fs::path> paths(compare_configs.begin(), compare_configs.end());
      return cmd_compare(paths, compare_out);
    }
    if (*tune) return cmd_tune(tune_config, tune_out);
    if (*coeffs) return cmd_coeffs(coeffs_config);
    if (*val) return cmd_validate(validate_config);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SingularModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  std::cerr << app.help();
  return kConfigError;
}
