#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "presto/config.hpp"
#include "presto/controller.hpp"
#include "presto/estimator.hpp"
#include "presto/observer.hpp"
#include "presto/plant.hpp"
#include "presto/trace.hpp"

namespace presto {

enum class ScenarioKind { tsmc, tsmc_saturated, adaptive_tsmc_saturated, smc_baseline };

std::string to_string(ScenarioKind k);
ScenarioKind parse_kind(const std::string& s);

/// How the configured Q enters the filter: as a continuous-time spectral
/// density (per-step covariance Q * Ts) or as the per-step covariance itself.
enum class ProcessNoiseModel { continuous, per_step };

struct EkfSetup {
  EkfConfig filter;  // filter.Q is the per-step covariance actually used
  Mat3 Q_config = Mat3::Zero();
  ProcessNoiseModel q_model = ProcessNoiseModel::continuous;
  /// Standard deviation of the simulated measurement noise on y = x1.
  double measurement_noise_std = 0.1;
  /// Standard deviation of additive per-step noise on the true states.
  double process_noise_std = 0.0;
};

struct Scenario {
  std::string name = "scenario";
  ScenarioKind kind = ScenarioKind::tsmc;
  PlantParams plant;
  DisturbanceSpec disturbance;
  State2 x0{1.0, 5.0};
  TsmcGains tsmc;
  SmcGains smc;
  double K1_nominal = 97.4;
  ObserverGains observer;
  /// Replace the observer by the true disturbance (d_hat = d, s = 0).
  bool perfect_observer = false;
  std::optional<EkfSetup> ekf;
  double dt = 1e-4;
  double horizon = 8.0;
  int decimation = 10;
  std::uint64_t seed = 1;
  Integrator integrator = Integrator::euler;
  SettleRule settle{2e-5, 0.5, {"x1"}};
  double divergence_limit = 1e6;

  bool saturated() const {
    return kind == ScenarioKind::tsmc_saturated || kind == ScenarioKind::adaptive_tsmc_saturated;
  }
  long long steps() const;
  int ekf_stride() const;
  /// Throws ConfigError describing the first violated requirement.
  void validate() const;
};

/// Builds a scenario from a config file; PRESTO_SEED, when set, overrides the seed.
Scenario load_scenario(const Config& cfg);
Scenario load_scenario(const std::filesystem::path& path);

/// Reference scenarios mirroring the bundled s71..s74 configs.
Scenario reference_scenario(ScenarioKind kind);

}  // namespace presto
