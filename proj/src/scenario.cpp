#include "presto/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "presto/errors.hpp"

namespace presto {

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::tsmc: return "tsmc";
    case ScenarioKind::tsmc_saturated: return "tsmc_saturated";
    case ScenarioKind::adaptive_tsmc_saturated: return "adaptive_tsmc_saturated";
    case ScenarioKind::smc_baseline: return "smc_baseline";
  }
  return "unknown";
}

ScenarioKind parse_kind(const std::string& s) {
  for (auto k : {ScenarioKind::tsmc, ScenarioKind::tsmc_saturated, ScenarioKind::adaptive_tsmc_saturated,
                 ScenarioKind::smc_baseline})
    if (to_string(k) == s) return k;
  throw ConfigError(fmt::format("unknown scenario kind '{}'", s));
}

long long Scenario::steps() const { return std::llround(horizon / dt); }

int Scenario::ekf_stride() const {
  if (!ekf) return 1;
  return static_cast<int>(std::max(1LL, std::llround(ekf->filter.Ts / dt)));
}

void Scenario::validate() const {
  auto fail = [&](const std::string& msg) { throw ConfigError(fmt::format("scenario '{}': {}", name, msg)); };
  auto gate = [&](auto&& check) {
    try {
      check();
    } catch (const DomainError& e) {
      fail(e.what());
    }
  };

  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be > 0");
  if (!(horizon > dt) || !std::isfinite(horizon)) fail("horizon must exceed dt");
  if (decimation < 1) fail("decimation must be >= 1");
  if (!(divergence_limit > 0.0)) fail("divergence_limit must be > 0");
  if (!std::isfinite(x0[0]) || !std::isfinite(x0[1])) fail("x0 must be finite");
  if (!(settle.threshold_fraction > 0.0)) fail("settle threshold_fraction must be > 0");
  if (!(settle.hold_duration >= 0.0)) fail("settle hold_duration must be >= 0");
  if (settle.signals.empty()) fail("settle signals must not be empty");
  for (const auto& s : settle.signals)
    if (s != "x1" && s != "x2") fail(fmt::format("settle signal '{}' must be x1 or x2", s));
  if (disturbance.table_t.size() != disturbance.table_d.size()) fail("disturbance table columns differ in length");
  for (std::size_t i = 1; i < disturbance.table_t.size(); ++i)
    if (!(disturbance.table_t[i] > disturbance.table_t[i - 1])) fail("disturbance table times must increase");

  gate([&] { plant.validate(); });

  if (kind == ScenarioKind::smc_baseline) {
    gate([&] { smc.validate(); });
    if (ekf) fail("smc_baseline does not use an [ekf] section");
    return;
  }

  gate([&] { observer.validate(); });
  gate([&] { tsmc.validate(); });
  if (tsmc.order() != 2) fail("the beam plant is second order; TSMC exponents must list exactly two pairs");

  if (saturated()) {
    if (!tsmc.sat) fail("saturated kinds need a [saturation] section");
  } else if (tsmc.sat) {
    fail("kind tsmc does not take a [saturation] section");
  }

  if (kind == ScenarioKind::adaptive_tsmc_saturated) {
    if (!ekf) fail("adaptive_tsmc_saturated needs an [ekf] section");
    gate([&] { ekf->filter.validate(); });
    const double ratio = ekf->filter.Ts / dt;
    if (std::fabs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio) || ratio < 1.0 - 1e-12)
      fail("ekf Ts must be a positive integer multiple of dt");
    if (!(ekf->measurement_noise_std >= 0.0)) fail("ekf measurement_noise_std must be >= 0");
    if (!(ekf->process_noise_std >= 0.0)) fail("ekf process_noise_std must be >= 0");
    if (perfect_observer) fail("perfect_observer is not available with the estimator in the loop");
  } else if (ekf) {
    fail("only adaptive_tsmc_saturated uses an [ekf] section");
  }
}

namespace {

Vec3 vec3(const std::vector<double>& v, const std::string& what) {
  if (v.size() != 3) throw ConfigError(fmt::format("{} needs 3 values, got {}", what, v.size()));
  return Vec3(v[0], v[1], v[2]);
}

Mat3 mat3(const std::vector<double>& v, const std::string& what) {
  if (v.size() == 3) return vec3(v, what).asDiagonal();
  if (v.size() == 9) {
    Mat3 M;
    for (int i = 0; i < 9; ++i) M(i / 3, i % 3) = v[static_cast<std::size_t>(i)];
    return M;
  }
  throw ConfigError(fmt::format("{} needs 3 (diagonal) or 9 (row-major) values, got {}", what, v.size()));
}

void read_table(const std::filesystem::path& path, DisturbanceSpec& spec) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open disturbance table '{}'", path.string()));
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_list(line);
    if (cells.size() != 2) throw ConfigError(fmt::format("disturbance table '{}': rows need t,d", path.string()));
    char* end = nullptr;
    const double t = std::strtod(cells[0].c_str(), &end);
    if (end == cells[0].c_str()) {
      if (first) {  // header row
        first = false;
        continue;
      }
      throw ConfigError(fmt::format("disturbance table '{}': bad row '{}'", path.string(), line));
    }
    first = false;
    spec.table_t.push_back(t);
    spec.table_d.push_back(std::strtod(cells[1].c_str(), nullptr));
  }
  if (spec.table_t.empty()) throw ConfigError(fmt::format("disturbance table '{}' is empty", path.string()));
}

DisturbanceSpec read_disturbance(const Config& cfg) {
  DisturbanceSpec spec;
  if (!cfg.has_section("disturbance")) return spec;
  if (cfg.has("disturbance", "table")) {
    read_table(cfg.resolve(cfg.get_string("disturbance", "table")), spec);
    return spec;
  }
  if (!cfg.has("disturbance", "amplitudes")) return spec;
  const auto amps = cfg.get_doubles("disturbance", "amplitudes");
  const auto kinds = cfg.get_strings("disturbance", "kinds");
  const auto rates = cfg.get_doubles("disturbance", "rates");
  if (kinds.size() != amps.size() || rates.size() != amps.size())
    throw ConfigError("[disturbance] amplitudes, kinds and rates must have equal length");
  for (std::size_t i = 0; i < amps.size(); ++i) {
    DisturbanceTerm term;
    term.amplitude = amps[i];
    term.rate = rates[i];
    if (kinds[i] == "sin_linear") term.kind = DisturbanceTerm::Kind::sin_linear;
    else if (kinds[i] == "sin_sqrt") term.kind = DisturbanceTerm::Kind::sin_sqrt;
    else throw ConfigError(fmt::format("[disturbance] unknown term kind '{}'", kinds[i]));
    spec.terms.push_back(term);
  }
  return spec;
}

PlantParams read_plant(const Config& cfg) {
  const std::string source = cfg.get_string("plant", "source", "direct");
  if (source == "galerkin") {
    BeamParams bp;
    bp.alpha = cfg.get_double("beam", "alpha");
    bp.beta = cfg.get_double("beam", "beta");
    bp.lambda = cfg.get_double("beam", "lambda");
    bp.quadrature_points = static_cast<int>(cfg.get_int("beam", "quadrature_points", bp.quadrature_points));
    try {
      return galerkin_coefficients(bp, parse_mass_term(cfg.get_string("beam", "mass_term", "slope_squared")));
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (source != "direct") throw ConfigError(fmt::format("[plant] unknown source '{}'", source));
  PlantParams pp;
  pp.K1 = cfg.get_double("plant", "K1", pp.K1);
  pp.K2 = cfg.get_double("plant", "K2", pp.K2);
  pp.g = cfg.get_double("plant", "g", pp.g);
  return pp;
}

std::uint64_t parse_seed(const std::string& text, const std::string& origin) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size() || text.front() == '-') throw std::invalid_argument("seed");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError(fmt::format("{}: '{}' is not a non-negative integer seed", origin, text));
  }
}

}  // namespace

Scenario load_scenario(const Config& cfg) {
  Scenario sc;
  if (!cfg.has_section("scenario")) throw ConfigError("config has no [scenario] section");
  sc.name = cfg.get_string("scenario", "name", cfg.origin().stem().string());
  if (sc.name.empty()) sc.name = "scenario";
  sc.kind = parse_kind(cfg.get_string("scenario", "kind"));
  sc.dt = cfg.get_double("scenario", "dt", sc.dt);
  sc.horizon = cfg.get_double("scenario", "horizon", sc.horizon);
  sc.decimation = static_cast<int>(cfg.get_int("scenario", "decimation", sc.decimation));
  sc.seed = parse_seed(cfg.get_string("scenario", "seed", "1"), "[scenario] seed");
  sc.divergence_limit = cfg.get_double("scenario", "divergence_limit", sc.divergence_limit);
  sc.perfect_observer = cfg.get_bool("scenario", "perfect_observer", false);
  if (cfg.has("scenario", "x0")) {
    const auto x0 = cfg.get_doubles("scenario", "x0");
    if (x0.size() != 2) throw ConfigError("[scenario] x0 needs 2 values");
    sc.x0 = {x0[0], x0[1]};
  }
  const std::string integ = cfg.get_string("scenario", "integrator", "euler");
  if (integ == "euler") sc.integrator = Integrator::euler;
  else if (integ == "rk4") sc.integrator = Integrator::rk4;
  else throw ConfigError(fmt::format("[scenario] unknown integrator '{}'", integ));

  if (const char* env = std::getenv("PRESTO_SEED"); env && *env) sc.seed = parse_seed(env, "PRESTO_SEED");

  sc.plant = read_plant(cfg);
  sc.disturbance = read_disturbance(cfg);

  sc.settle.threshold_fraction = cfg.get_double("settle", "threshold_fraction", sc.settle.threshold_fraction);
  sc.settle.hold_duration = cfg.get_double("settle", "hold_duration", sc.settle.hold_duration);
  if (cfg.has("settle", "signals")) sc.settle.signals = cfg.get_strings("settle", "signals");

  if (sc.kind == ScenarioKind::smc_baseline) {
    if (!cfg.has_section("smc")) throw ConfigError("smc_baseline needs an [smc] section");
    sc.smc.Y = cfg.get_double("smc", "Y", sc.smc.Y);
    sc.smc.eta = cfg.get_double("smc", "eta", sc.smc.eta);
    sc.smc.Kg = cfg.get_double("smc", "K", sc.smc.Kg);
    sc.smc.K1_min = cfg.get_double("smc", "K1_min", sc.smc.K1_min);
    sc.smc.K1_max = cfg.get_double("smc", "K1_max", sc.smc.K1_max);
    sc.K1_nominal = cfg.get_double("smc", "K1_nominal", sc.K1_nominal);
  } else {
    if (!cfg.has_section("observer")) throw ConfigError(fmt::format("{} needs an [observer] section", to_string(sc.kind)));
    if (!cfg.has_section("tsmc")) throw ConfigError(fmt::format("{} needs a [tsmc] section", to_string(sc.kind)));
    sc.observer.k = cfg.get_double("observer", "k");
    sc.observer.beta0 = cfg.get_double("observer", "beta0");
    sc.observer.eps = cfg.get_double("observer", "eps");
    if (cfg.has("observer", "exponent")) sc.observer.e0 = parse_pair(cfg.get_string("observer", "exponent"));
    sc.observer.smooth_sgn_width = cfg.get_double("observer", "smooth_sgn_width", 0.0);

    sc.tsmc.alphas = cfg.get_doubles("tsmc", "alpha");
    sc.tsmc.betas = cfg.get_doubles("tsmc", "beta");
    sc.tsmc.exps = cfg.get_pairs("tsmc", "exponents");
    sc.tsmc.delta = cfg.get_double("tsmc", "delta");
    sc.tsmc.mu = cfg.get_double("tsmc", "mu");
    sc.tsmc.tau = cfg.get_double("tsmc", "tau", 0.0);
    if (cfg.has_section("saturation")) {
      SaturationBounds sat;
      sat.u_min = cfg.get_double("saturation", "u_min");
      sat.u_max = cfg.get_double("saturation", "u_max");
      sc.tsmc.sat = sat;
    }
  }

  if (cfg.has_section("ekf")) {
    EkfSetup e;
    e.filter.Ts = cfg.get_double("ekf", "Ts", sc.dt);
    e.Q_config = cfg.has("ekf", "Q") ? mat3(cfg.get_doubles("ekf", "Q"), "[ekf] Q") : Mat3(Vec3(1e-4, 1e-4, 1e-2).asDiagonal());
    const std::string qm = cfg.get_string("ekf", "q_model", "continuous");
    if (qm == "continuous") e.q_model = ProcessNoiseModel::continuous;
    else if (qm == "per_step") e.q_model = ProcessNoiseModel::per_step;
    else throw ConfigError(fmt::format("[ekf] unknown q_model '{}'", qm));
    e.filter.Q = e.q_model == ProcessNoiseModel::continuous ? Mat3(e.Q_config * e.filter.Ts) : e.Q_config;
    e.filter.R = cfg.get_double("ekf", "R", e.filter.R);
    if (cfg.has("ekf", "P0")) e.filter.P0 = mat3(cfg.get_doubles("ekf", "P0"), "[ekf] P0");
    if (cfg.has("ekf", "x0_hat")) e.filter.x0_hat = vec3(cfg.get_doubles("ekf", "x0_hat"), "[ekf] x0_hat");
    e.measurement_noise_std = cfg.get_double("ekf", "measurement_noise_std", std::sqrt(e.filter.R));
    e.process_noise_std = cfg.get_double("ekf", "process_noise_std", 0.0);
    sc.ekf = e;
  }

  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) { return load_scenario(Config::load(path)); }

Scenario reference_scenario(ScenarioKind kind) {
  Scenario sc;
  sc.kind = kind;
  const DisturbanceTerm::Kind lin = DisturbanceTerm::Kind::sin_linear;
  const DisturbanceTerm::Kind sq = DisturbanceTerm::Kind::sin_sqrt;
  switch (kind) {
    case ScenarioKind::tsmc:
      sc.name = "s71";
      sc.disturbance.terms = {{2.0, lin, 0.1}, {3.0, sq, 0.2}};
      sc.observer = ObserverGains{4.0, 7.0, 10.0, {1, 7}, 0.0};
      sc.tsmc.alphas = {100.0};
      sc.tsmc.betas = {9.0};
      sc.tsmc.exps = {{3, 5}, {1, 3}};
      sc.tsmc.delta = 5.0;
      sc.tsmc.mu = 1e-4;
      break;
    case ScenarioKind::tsmc_saturated:
    case ScenarioKind::adaptive_tsmc_saturated:
      sc.name = kind == ScenarioKind::tsmc_saturated ? "s72" : "s73";
      sc.disturbance.terms = {{0.2, lin, 0.1}, {0.3, sq, 0.2}};
      sc.observer = ObserverGains{5.0, 6.0, 10.0, {1, 7}, 0.0};
      sc.tsmc.alphas = {4.9};
      sc.tsmc.betas = {3.0};
      sc.tsmc.exps = {{3, 5}, {1, 3}};
      sc.tsmc.delta = 3.0;
      sc.tsmc.mu = 0.01;
      sc.tsmc.tau = 3.7;
      sc.tsmc.sat = SaturationBounds{-30.0, 10.0};
      if (kind == ScenarioKind::adaptive_tsmc_saturated) {
        EkfSetup e;
        e.Q_config = Vec3(1e-4, 1e-4, 1e-2).asDiagonal();
        e.filter.Ts = sc.dt;
        e.filter.Q = e.Q_config * e.filter.Ts;
        sc.ekf = e;
      }
      break;
    case ScenarioKind::smc_baseline:
      sc.name = "s74";
      break;
  }
  sc.validate();
  return sc;
}

}  // namespace presto
