#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "presto/scenario.hpp"
#include "presto/trace.hpp"
#include "presto/tuner.hpp"

namespace presto {

struct RunReport {
  std::string name;
  ScenarioKind kind = ScenarioKind::tsmc;
  double u_l2 = 0.0;
  double u_linf = 0.0;
  double ey_l2 = 0.0;
  double ey_linf = 0.0;
  std::optional<double> ex_l2;
  std::optional<double> ex_linf;
  /// Pre-saturation command norms for saturated kinds.
  std::optional<double> uc_l2;
  std::optional<double> uc_linf;
  std::optional<double> settling;
  bool diverged = false;
  double diverged_at = 0.0;
  std::vector<std::string> warnings;
  std::filesystem::path trace_path;
};

struct RunResult {
  Trace trace;
  RunReport report;
};

/// Fixed-step closed loop. Never throws on divergence: the report is marked
/// and the trace holds every sample logged before the state left the
/// admissible region.
RunResult run_scenario(const Scenario& sc);

/// Norms and settling time of a finished trace.
RunReport summarize(const Trace& tr, const Scenario& sc);

struct Comparison {
  std::vector<RunReport> rows;
};

/// Runs the scenarios (concurrently when exec is parallel) and writes each
/// trace to out_dir when it is non-empty.
Comparison compare_controllers(const std::vector<Scenario>& scenarios, const std::filesystem::path& out_dir,
                               Execution exec = Execution::parallel);

// --- tuning ------------------------------------------------------------------

/// Tunable continuous gains; exponent pairs are held fixed.
enum class TunableGain { k, beta0, eps, alpha1, beta1, delta, mu, tau };

TunableGain parse_gain(const std::string& s);
std::string to_string(TunableGain g);
/// Default search box for a gain; each contains the published values.
Box default_box(TunableGain g);

/// Copy of `base` with the design vector applied, or nullopt when any
/// entry is non-positive or non-finite.
std::optional<Scenario> apply_design(const Scenario& base, std::span<const TunableGain> gains,
                                     std::span<const double> values);

/// Settling time of the closed loop with the candidate gains; horizon +
/// overshoot when the run does not settle or diverges; +inf for invalid gains.
double fitness_settling_time(std::span<const double> values, const Scenario& base,
                             std::span<const TunableGain> gains);

struct TuneJob {
  Scenario base;
  std::vector<TunableGain> gains;
  PsoConfig pso;
};

TuneJob load_tune_job(const Config& cfg);

}  // namespace presto
