#include "presto/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <cstdlib>
#include <limits>
#include <random>
#include <set>

#include <fmt/format.h>

#include "presto/errors.hpp"

namespace presto {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> trace_columns(const Scenario& sc) {
  if (sc.kind == ScenarioKind::smc_baseline) return {"x1", "x2", "u", "u_eq", "u_c", "d", "s"};
  std::vector<std::string> names{"x1", "x2", "u", "d", "d_hat", "d_tilde", "s", "s1", "s2", "zdot", "forcing", "fx"};
  if (sc.saturated()) {
    names.insert(names.begin() + 3, "u_c");
    names.insert(names.begin() + 4, "v_r");
  }
  if (sc.kind == ScenarioKind::adaptive_tsmc_saturated)
    for (const char* n : {"x1_hat", "x2_hat", "K1_hat", "trace_P", "innovation", "y", "e_x"}) names.emplace_back(n);
  return names;
}

std::mt19937_64 seeded(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

bool escaped(const State2& x, double limit) {
  return !std::isfinite(x[0]) || !std::isfinite(x[1]) || std::max(std::fabs(x[0]), std::fabs(x[1])) > limit;
}

RunResult run_smc(const Scenario& sc) {
  RunResult res{Trace(sc.dt * sc.decimation, trace_columns(sc)), {}};
  const long long n = sc.steps();
  res.trace.reserve(static_cast<std::size_t>(n / sc.decimation + 1));
  State2 x = sc.x0;
  bool diverged = false;
  double diverged_at = 0.0;
  for (long long i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) * sc.dt;
    const double d = disturbance_value(sc.disturbance, t);
    const SmcCommand cmd = smc_control(x, sc.smc, sc.plant, sc.K1_nominal);
    if (i % sc.decimation == 0) {
      const double row[] = {x[0], x[1], cmd.u, cmd.u_eq, cmd.u_c, d, cmd.s};
      res.trace.push(row);
    }
    if (i == n) break;
    x = plant_step(x, cmd.u, d, sc.plant, sc.dt, sc.integrator);
    if (escaped(x, sc.divergence_limit)) {
      diverged = true;
      diverged_at = static_cast<double>(i + 1) * sc.dt;
      break;
    }
  }
  res.report = summarize(res.trace, sc);
  res.report.diverged = diverged;
  res.report.diverged_at = diverged_at;
  if (diverged) res.report.settling.reset();
  return res;
}

RunResult run_tsmc(const Scenario& sc) {
  const bool adaptive = sc.kind == ScenarioKind::adaptive_tsmc_saturated;
  const bool sat = sc.saturated();
  RunResult res{Trace(sc.dt * sc.decimation, trace_columns(sc)), {}};
  const long long n = sc.steps();
  res.trace.reserve(static_cast<std::size_t>(n / sc.decimation + 1));

  std::mt19937_64 meas_rng = seeded(sc.seed, 1);
  std::mt19937_64 proc_rng = seeded(sc.seed, 2);
  std::normal_distribution<double> normal(0.0, 1.0);

  State2 x = sc.x0;
  EkfState est;
  EkfConfig filter;
  int stride = 1;
  double y = 0.0;
  if (adaptive) {
    filter = sc.ekf->filter;
    est = ekf_init(filter);
    stride = sc.ekf_stride();
    y = est.x_hat(0);
  }

  auto model = [&]() {
    PlantParams pm = sc.plant;
    if (adaptive) pm.K1 = est.x_hat(2);
    return pm;
  };
  auto feedback_state = [&]() -> State2 {
    if (adaptive) return {est.x_hat(0), est.x_hat(1)};
    return x;
  };

  ObserverState obs;
  {
    const State2 xs = feedback_state();
    obs = observer_init(xs[1], model().drift(xs[0]), sc.observer);
  }

  double u = 0.0;
  bool diverged = false;
  double diverged_at = 0.0;
  std::vector<double> row;
  row.reserve(res.trace.names().size());

  for (long long i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) * sc.dt;
    const double d = disturbance_value(sc.disturbance, t);

    double innovation = 0.0;
    if (adaptive && i > 0 && i % stride == 0) {
      try {
        est = ekf_predict(est, u, filter, sc.plant.K2, sc.plant.g);
        y = x[0] + sc.ekf->measurement_noise_std * normal(meas_rng);
        const EkfUpdate up = ekf_update(est, y, filter);
        est = up.state;
        innovation = up.innovation;
      } catch (const SingularInnovationError& e) {
        res.report.warnings.emplace_back(e.what());
        diverged = true;
        diverged_at = t;
        break;
      }
      if (!est.x_hat.allFinite()) {
        diverged = true;
        diverged_at = t;
        break;
      }
    }

    const PlantParams pm = model();
    const State2 xs = feedback_state();
    const double fx = pm.drift(xs[0]);
    const double b = pm.input_gain();
    obs = observer_sync(obs, xs[1], fx, sc.observer);
    const double s_obs = sc.perfect_observer ? 0.0 : obs.s;
    const double d_hat = sc.perfect_observer ? d : obs.d_hat;
    const SlidingStack stack = sliding_stack_n2(xs, s_obs, sc.tsmc);

    double u_c = 0.0, v_r = 0.0, forcing = 0.0;
    if (sat) {
      const SaturatedCommand cmd = saturated_tsmc_control(xs, d_hat, stack, pm, sc.tsmc);
      u = cmd.u;
      u_c = cmd.u_c;
      v_r = cmd.v_r;
      forcing = v_r;
    } else {
      u = tsmc_control(xs, d_hat, stack, pm, sc.tsmc);
      forcing = b * u;
    }
    const double zdot = z_derivative(obs, fx, forcing, sc.observer);

    if (i % sc.decimation == 0) {
      row.clear();
      row.insert(row.end(), {x[0], x[1], u});
      if (sat) row.insert(row.end(), {u_c, v_r});
      row.insert(row.end(), {d, d_hat, d_hat - d, s_obs, stack.s_values[0], stack.s_values[1], zdot, forcing, fx});
      if (adaptive)
        row.insert(row.end(), {est.x_hat(0), est.x_hat(1), est.x_hat(2), est.P.trace(), innovation, y,
                               x[0] - est.x_hat(0)});
      res.trace.push(row);
    }
    if (i == n) break;

    obs.z += sc.dt * zdot;
    x = plant_step(x, u, d, sc.plant, sc.dt, sc.integrator);
    if (adaptive && sc.ekf->process_noise_std > 0.0) {
      x[0] += sc.ekf->process_noise_std * normal(proc_rng);
      x[1] += sc.ekf->process_noise_std * normal(proc_rng);
    }
    if (escaped(x, sc.divergence_limit) || !std::isfinite(obs.z)) {
      diverged = true;
      diverged_at = static_cast<double>(i + 1) * sc.dt;
      break;
    }
  }

  auto warnings = std::move(res.report.warnings);
  res.report = summarize(res.trace, sc);
  res.report.warnings.insert(res.report.warnings.begin(), warnings.begin(), warnings.end());
  res.report.diverged = diverged;
  res.report.diverged_at = diverged_at;
  if (diverged) res.report.settling.reset();
  if (!sat && !sc.perfect_observer && !res.trace.empty()) {
    const double d_max = linf_norm(res.trace, "d");
    if (d_max > sc.observer.beta0)
      res.report.warnings.push_back(fmt::format(
          "realized |d| reaches {:.6g}, above observer gain beta0 = {:.6g}; the convergence bound does not apply",
          d_max, sc.observer.beta0));
  }
  return res;
}

}  // namespace

RunReport summarize(const Trace& tr, const Scenario& sc) {
  RunReport r;
  r.name = sc.name;
  r.kind = sc.kind;
  if (tr.empty()) return r;
  r.u_l2 = l2_norm(tr, "u");
  r.u_linf = linf_norm(tr, "u");
  r.ey_l2 = l2_norm(tr, "x1");
  r.ey_linf = linf_norm(tr, "x1");
  if (tr.has("e_x")) {
    r.ex_l2 = l2_norm(tr, "e_x");
    r.ex_linf = linf_norm(tr, "e_x");
  }
  if (sc.saturated() && tr.has("u_c")) {
    r.uc_l2 = l2_norm(tr, "u_c");
    r.uc_linf = linf_norm(tr, "u_c");
  }
  r.settling = settling_time(tr, sc.settle);
  return r;
}

RunResult run_scenario(const Scenario& sc) {
  sc.validate();
  return sc.kind == ScenarioKind::smc_baseline ? run_smc(sc) : run_tsmc(sc);
}

Comparison compare_controllers(const std::vector<Scenario>& scenarios, const std::filesystem::path& out_dir,
                               Execution exec) {
  const auto n = static_cast<std::ptrdiff_t>(scenarios.size());
  std::vector<RunResult> results(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  auto one = [&](std::ptrdiff_t i) {
    try {
      results[static_cast<std::size_t>(i)] = run_scenario(scenarios[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) one(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) one(i);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Comparison cmp;
  std::set<std::string> used;
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  for (auto& r : results) {
    if (!out_dir.empty()) {
      std::string stem = r.report.name;
      for (int k = 2; !used.insert(stem).second; ++k) stem = fmt::format("{}_{}", r.report.name, k);
      r.report.trace_path = out_dir / (stem + ".csv");
      export_trace(r.trace, r.report.trace_path);
    }
    cmp.rows.push_back(std::move(r.report));
  }
  return cmp;
}

// --- tuning ------------------------------------------------------------------

namespace {

constexpr TunableGain kAllGains[] = {TunableGain::k,      TunableGain::beta0, TunableGain::eps, TunableGain::alpha1,
                                     TunableGain::beta1,  TunableGain::delta, TunableGain::mu,  TunableGain::tau};

}  // namespace

std::string to_string(TunableGain g) {
  switch (g) {
    case TunableGain::k: return "k";
    case TunableGain::beta0: return "beta0";
    case TunableGain::eps: return "eps";
    case TunableGain::alpha1: return "alpha1";
    case TunableGain::beta1: return "beta1";
    case TunableGain::delta: return "delta";
    case TunableGain::mu: return "mu";
    case TunableGain::tau: return "tau";
  }
  return "unknown";
}

TunableGain parse_gain(const std::string& s) {
  for (auto g : kAllGains)
    if (to_string(g) == s) return g;
  throw ConfigError(fmt::format("unknown tunable gain '{}'", s));
}

Box default_box(TunableGain g) {
  switch (g) {
    case TunableGain::k:
    case TunableGain::beta0:
    case TunableGain::eps:
    case TunableGain::beta1: return {0.0, 20.0};
    case TunableGain::alpha1: return {0.0, 200.0};
    case TunableGain::delta: return {0.0, 10.0};
    case TunableGain::mu: return {0.0, 0.1};
    case TunableGain::tau: return {0.0, 10.0};
  }
  return {0.0, 1.0};
}

std::optional<Scenario> apply_design(const Scenario& base, std::span<const TunableGain> gains,
                                     std::span<const double> values) {
  if (gains.size() != values.size()) throw DomainError("design vector length differs from the gain list");
  if (base.kind == ScenarioKind::smc_baseline) throw DomainError("the baseline SMC has no tunable observer/TSMC gains");
  Scenario sc = base;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v) || !(v > 0.0)) return std::nullopt;
    switch (gains[i]) {
      case TunableGain::k: sc.observer.k = v; break;
      case TunableGain::beta0: sc.observer.beta0 = v; break;
      case TunableGain::eps: sc.observer.eps = v; break;
      case TunableGain::alpha1: sc.tsmc.alphas.at(0) = v; break;
      case TunableGain::beta1: sc.tsmc.betas.at(0) = v; break;
      case TunableGain::delta: sc.tsmc.delta = v; break;
      case TunableGain::mu: sc.tsmc.mu = v; break;
      case TunableGain::tau: sc.tsmc.tau = v; break;
    }
  }
  try {
    sc.validate();
  } catch (const ConfigError&) {
    return std::nullopt;
  }
  return sc;
}

double fitness_settling_time(std::span<const double> values, const Scenario& base,
                             std::span<const TunableGain> gains) {
  const auto sc = apply_design(base, gains, values);
  if (!sc) return kInf;
  const RunResult r = run_scenario(*sc);
  if (!r.report.diverged && r.report.settling) return *r.report.settling;
  double overshoot = 0.0;
  for (const auto& s : sc->settle.signals) overshoot = std::max(overshoot, linf_norm(r.trace, s));
  if (r.report.diverged) overshoot = std::max(overshoot, sc->divergence_limit);
  return sc->horizon + overshoot;
}

TuneJob load_tune_job(const Config& cfg) {
  TuneJob job;
  if (!cfg.has_section("tune")) throw ConfigError("tuning config has no [tune] section");
  if (cfg.has("tune", "scenario")) job.base = load_scenario(cfg.resolve(cfg.get_string("tune", "scenario")));
  else job.base = load_scenario(cfg);
  if (job.base.kind == ScenarioKind::smc_baseline) throw ConfigError("tuning needs a TSMC scenario");
  if (cfg.has("tune", "horizon")) {
    job.base.horizon = cfg.get_double("tune", "horizon");
    job.base.validate();
  }

  for (const auto& name : cfg.get_strings("tune", "gains")) job.gains.push_back(parse_gain(name));
  if (job.gains.empty()) throw ConfigError("[tune] gains must list at least one gain");
  for (auto g : job.gains) {
    Box box = default_box(g);
    const std::string key = "box_" + to_string(g);
    if (cfg.has("tune", key)) {
      const auto lh = cfg.get_doubles("tune", key);
      if (lh.size() != 2) throw ConfigError(fmt::format("[tune] {} needs lo, hi", key));
      box = {lh[0], lh[1]};
    }
    job.pso.bounds.push_back(box);
  }

  job.pso.swarm_size = static_cast<int>(cfg.get_int("tune", "swarm_size", job.pso.swarm_size));
  job.pso.max_generations = static_cast<int>(cfg.get_int("tune", "generations", job.pso.max_generations));
  job.pso.W = cfg.get_double("tune", "W", job.pso.W);
  job.pso.C1 = cfg.get_double("tune", "C1", job.pso.C1);
  job.pso.C2 = cfg.get_double("tune", "C2", job.pso.C2);
  if (cfg.has("tune", "V_max")) job.pso.V_max = cfg.get_doubles("tune", "V_max");
  job.pso.seed = static_cast<std::uint64_t>(cfg.get_int("tune", "seed", static_cast<long long>(job.base.seed)));
  if (const char* env = std::getenv("PRESTO_SEED"); env && *env) job.pso.seed = job.base.seed;
  try {
    job.pso.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return job;
}

}  // namespace presto
