// One line per acceptance criterion. Numbered criteria gate the exit code;
// lines tagged "info" are reported without gating.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "presto/estimator.hpp"
#include "presto/harness.hpp"
#include "presto/mathcore.hpp"
#include "presto/observer.hpp"
#include "presto/plant.hpp"
#include "presto/tuner.hpp"

using namespace presto;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = PRESTO_CONFIG_DIR;
int g_failed = 0;

void report(const std::string& id, bool ok, const std::string& what, bool gating = true) {
  if (gating && !ok) ++g_failed;
  fmt::print("[{}] {:<5} {}\n", ok ? "PASS" : "FAIL", id, what);
  std::fflush(stdout);
}

struct Timed {
  RunResult result;
  double seconds;
};

Timed timed_run(const Scenario& sc) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult r = run_scenario(sc);
  const auto t1 = std::chrono::steady_clock::now();
  return {std::move(r), std::chrono::duration<double>(t1 - t0).count()};
}

std::string fmt_ts(const std::optional<double>& t) { return t ? fmt::format("{:.3f}", *t) : "not settled"; }

bool within(const std::optional<double>& v, double target, double lo_frac, double hi_frac) {
  return v && *v >= target * lo_frac && *v <= target * hi_frac;
}

// 1, 2, 3 -----------------------------------------------------------------

void settling_criteria(std::map<std::string, RunReport>& runs) {
  const Timed s71 = timed_run(load_scenario(kConfigs / "s71.cfg"));
  const auto& r1 = s71.result.report;
  report("AC1", within(r1.settling, 1.9, 0.7, 1.3) && s71.seconds < 10.0,
         fmt::format("s71 settling time {} in [{:.2f}, {:.2f}]; runtime {:.2f} s", fmt_ts(r1.settling), 1.9 * 0.7,
                     1.9 * 1.3, s71.seconds));

  const Timed s72 = timed_run(load_scenario(kConfigs / "s72.cfg"));
  const auto& r2 = s72.result.report;
  bool contained = true;
  for (double u : s72.result.trace.column("u")) contained = contained && u >= -30.0 && u <= 10.0;
  report("AC2", within(r2.settling, 2.6, 0.7, 1.3) && contained && s72.seconds < 10.0,
         fmt::format("s72 settling time {} in [{:.2f}, {:.2f}]; every logged u in [-30, 10]: {}; runtime {:.2f} s",
                     fmt_ts(r2.settling), 2.6 * 0.7, 2.6 * 1.3, contained ? "yes" : "no", s72.seconds));

  const RunResult s74 = run_scenario(load_scenario(kConfigs / "s74.cfg"));
  const auto& r4 = s74.report;
  const bool slower = r4.settling && r1.settling && r2.settling && *r4.settling > *r1.settling &&
                      *r4.settling > *r2.settling;
  report("AC3", slower && within(r4.settling, 6.7, 0.6, 1.4),
         fmt::format("SMC settling time {} exceeds TSMC {} and saturated TSMC {}; in [{:.2f}, {:.2f}]",
                     fmt_ts(r4.settling), fmt_ts(r1.settling), fmt_ts(r2.settling), 6.7 * 0.6, 6.7 * 1.4));

  runs["s71"] = r1;
  runs["s72"] = r2;
  runs["s74"] = r4;
}

// 4 -----------------------------------------------------------------------

void parameter_convergence(std::map<std::string, RunReport>& runs) {
  const Scenario base = load_scenario(kConfigs / "s73.cfg");
  const double target = 97.4, tol = 0.05 * 97.4;
  int ok = 0;
  double worst_entry = 0.0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Scenario sc = base;
    sc.seed = seed;
    const RunResult r = run_scenario(sc);
    if (seed == 1) runs["s73"] = r.report;
    const auto k = r.trace.column("K1_hat");
    // last sample outside the band; entry is the sample after it
    std::optional<std::size_t> last_out;
    for (std::size_t i = 0; i < k.size(); ++i)
      if (std::fabs(k[i] - target) > tol) last_out = i;
    const bool stays = !r.report.diverged && (!last_out || *last_out + 1 < k.size());
    const double entry = last_out ? r.trace.time(*last_out + 1) : 0.0;
    if (stays && entry < 5.0) ++ok;
    worst_entry = std::max(worst_entry, stays ? entry : INFINITY);
  }
  report("AC4", ok == 10,
         fmt::format("K1_hat from 20 enters and stays within 97.4 +/- 5% before t = 5 on {}/10 seeds "
                     "(latest entry t = {:.3f}, initial guess {}, q_model {})",
                     ok, worst_entry, base.ekf->filter.x0_hat(2),
                     base.ekf->q_model == ProcessNoiseModel::continuous ? "continuous" : "per_step"));
}

// 5 -----------------------------------------------------------------------

void observer_prescribed_time() {
  const Scenario sc = load_scenario(kConfigs / "s71.cfg");
  const ObserverGains& og = sc.observer;
  const PlantParams& pp = sc.plant;
  const double dt = 1e-4, horizon = 5.0;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int ok = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double s0 = -2.0 + 4.0 * unit(rng);
    // admissible disturbance: two tones with |A1| + |A2| <= beta0
    const double share = unit(rng), scale = og.beta0 * unit(rng);
    using K = DisturbanceTerm::Kind;
    const DisturbanceSpec dist{{{scale * share, K::sin_linear, 2.0 * unit(rng)},
                                {scale * (1.0 - share), K::sin_sqrt, 5.0 * unit(rng)}},
                               {},
                               {}};
    const double u_amp = 5.0 * unit(rng), u_w = 10.0 * unit(rng);
    State2 x{-1.0 + 2.0 * unit(rng), -2.0 + 4.0 * unit(rng)};
    ObserverState st{x[1] + s0, s0, 0.0};

    const double bound = prescribed_time_bound(observer_time_constants(og, s0));
    std::optional<double> crossing;
    for (long long i = 0; static_cast<double>(i) * dt <= horizon; ++i) {
      const double t = static_cast<double>(i) * dt;
      const double fx = pp.drift(x[0]);
      st = observer_sync(st, x[1], fx, og);
      if (std::fabs(st.s) < 1e-3) {
        crossing = t;
        break;
      }
      const double u = u_amp * std::sin(u_w * t);
      st.z += dt * z_derivative(st, fx, pp.input_gain() * u, og);
      x = plant_step(x, u, disturbance_value(dist, t), pp, dt);
    }
    if (crossing && *crossing <= bound) ++ok;
    worst_ratio = std::max(worst_ratio, crossing ? *crossing / bound : INFINITY);
  }
  report("AC5", ok == 50,
         fmt::format("observer |s| < 1e-3 crossing within the prescribed bound on {}/50 randomized runs "
                     "(worst crossing/bound = {:.3f})",
                     ok, worst_ratio));
}

// 6 -----------------------------------------------------------------------

void sliding_dynamics() {
  Scenario sc = load_scenario(kConfigs / "s71.cfg");
  sc.perfect_observer = true;
  sc.decimation = 1;
  const RunResult r = run_scenario(sc);
  const auto s2 = r.trace.column("s2");
  const ExponentPair e2 = sc.tsmc.exps.back();
  const double band = 1e-3, limit = 5.0 * sc.dt;
  double worst = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i + 1 < s2.size(); ++i) {
    if (std::fabs(s2[i]) <= band) continue;
    const double fd = (s2[i + 1] - s2[i]) / sc.dt;
    const double law = -sc.tsmc.delta * s2[i] - sc.tsmc.mu * signed_pow(s2[i], e2);
    worst = std::max(worst, std::fabs(fd - law) / std::fabs(law));
    ++used;
  }
  report("AC6", used > 1000 && worst < limit,
         fmt::format("finite-difference s2' vs -delta s2 - mu s2^(1/3) with injected d_hat: worst relative error "
                     "{:.3e} < {:.1e} over {} samples with |s2| > {}",
                     worst, limit, used, band));
}

// 7 -----------------------------------------------------------------------

void quadrature() {
  using std::numbers::pi;
  const double p2 = pi * pi, p4 = p2 * p2, p6 = p4 * p2;
  const ModeIntegrals mi = mode_integrals(16);
  const std::pair<double, double> pairs[] = {{mi.I_pp2, p2 / 2}, {mi.I_dd, -p2 / 2},   {mi.I_4, p4 / 2},
                                             {mi.I_6, -p6 / 2},  {mi.I_3p, -p4 / 2},  {mi.I_pp2sq, p4 / 2},
                                             {mi.I_00, 0.5}};
  double worst = 0.0;
  for (const auto& [got, want] : pairs) worst = std::max(worst, std::fabs(got - want) / std::fabs(want));
  report("AC7", worst < 1e-8, fmt::format("seven mode integrals vs closed forms: worst relative error {:.2e}", worst));
}

// 8 -----------------------------------------------------------------------

void ekf_algebra() {
  const double K2 = -19.97, g = -1.09, Ts = 1e-3, eps = 1e-6;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 x(2.0 * u(rng), 10.0 * u(rng), 100.0 + 50.0 * u(rng));
    const double uc = 20.0 * u(rng);
    const Mat3 F = transition_jacobian(x, Ts, K2);
    for (int j = 0; j < 3; ++j) {
      Vec3 dp = x, dm = x;
      dp(j) += eps;
      dm(j) -= eps;
      const Vec3 col = (augmented_transition(dp, uc, Ts, K2, g) - augmented_transition(dm, uc, Ts, K2, g)) / (2 * eps);
      for (int i = 0; i < 3; ++i) {
        const double denom = std::max(std::fabs(F(i, j)), 1e-3);
        worst = std::max(worst, std::fabs(col(i) - F(i, j)) / denom);
      }
    }
  }

  EkfConfig cfg;
  cfg.Ts = 0.0;
  cfg.Q = Mat3::Zero();
  cfg.Q(0, 0) = 1.0;
  cfg.R = 1.0;
  EkfState st{Vec3::Zero(), Mat3::Zero()};
  st.P(0, 0) = 1.0;
  st = ekf_predict(st, 0.0, cfg, K2, g);
  const double p_pred = st.P(0, 0);
  const EkfUpdate up = ekf_update(st, 2.0, cfg);
  const double err = std::max({std::fabs(p_pred - 2.0), std::fabs(up.state.P(0, 0) - 2.0 / 3.0),
                               std::fabs(up.state.x_hat(0) - 4.0 / 3.0)});
  report("AC8", worst < 1e-6 && err <= 1e-12,
         fmt::format("Jacobian vs central differences on 100 states: worst relative error {:.2e}; scalar oracle "
                     "P 1 -> {} -> {:.15f}, x_hat 0 -> {:.15f} (max error {:.1e})",
                     worst, p_pred, up.state.P(0, 0), up.state.x_hat(0), err));
}

// 9 -----------------------------------------------------------------------

void pso_sanity() {
  const double c[] = {1.5, -2.0, 0.25};
  const Fitness sphere = [&](std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - c[i]) * (x[i] - c[i]);
    return acc;
  };
  int ok = 0;
  bool monotone = true;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    PsoConfig cfg;
    cfg.swarm_size = 20;
    cfg.max_generations = 100;
    cfg.bounds = {{-5.0, 5.0}, {-5.0, 5.0}, {-5.0, 5.0}};
    cfg.seed = seed;
    const PsoResult r = pso_run(sphere, cfg);
    if (r.best_cost < 1e-4) ++ok;
    worst = std::max(worst, r.best_cost);
    for (std::size_t i = 1; i < r.history.size(); ++i) monotone = monotone && r.history[i] <= r.history[i - 1];
  }
  report("AC9", ok == 10 && monotone,
         fmt::format("sphere function below 1e-4 on {}/10 seeds (worst {:.2e}); best-cost history nonincreasing: {}",
                     ok, worst, monotone ? "yes" : "no"));
}

// 10 ----------------------------------------------------------------------

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[fs::relative(entry.path(), dir).string()] = ss.str();
  }
  return files;
}

void determinism(const std::string& cli) {
  const fs::path out = fs::temp_directory_path() / "presto_acceptance_compare";
  const std::string cmd = fmt::format("\"{}\" compare \"{}\" \"{}\" \"{}\" \"{}\" --out \"{}\" > /dev/null", cli,
                                      (kConfigs / "s71.cfg").string(), (kConfigs / "s72.cfg").string(),
                                      (kConfigs / "s73.cfg").string(), (kConfigs / "s74.cfg").string(), out.string());
  fs::remove_all(out);
  const int rc1 = std::system(cmd.c_str());
  const auto first = snapshot(out);
  fs::remove_all(out);
  const int rc2 = std::system(cmd.c_str());
  const auto second = snapshot(out);
  report("AC10", rc1 == 0 && rc2 == 0 && first.size() >= 6 && first == second,
         fmt::format("compare over s71..s74 twice: exit codes {}/{}, {} files, byte-identical: {}", rc1, rc2,
                     first.size(), first == second ? "yes" : "no"));
}

// informational -------------------------------------------------------------

void norm_agreement(const std::map<std::string, RunReport>& runs) {
  struct Cell {
    const char* row;
    const char* col;
    double paper;
    double ours;
  };
  const RunReport &a = runs.at("s71"), &b = runs.at("s72"), &c = runs.at("s73"), &d = runs.at("s74");
  const std::vector<Cell> cells{
      {"s71", "|u|_2", 1316.9, a.u_l2},          {"s71", "|u|_inf", 999.3451, a.u_linf},
      {"s71", "|e_y|_2", 6.6577, a.ey_l2},       {"s71", "|e_y|_inf", 1.0117, a.ey_linf},
      {"s72", "|u|_2", 399.9741, b.u_l2},        {"s72", "|e_y|_2", 17.0777, b.ey_l2},
      {"s72", "|e_y|_inf", 1.1759, b.ey_linf},   {"s73", "|u|_2", 229.5822, c.u_l2},
      {"s73", "|e_y|_2", 17.1464, c.ey_l2},      {"s73", "|e_y|_inf", 1.1837, c.ey_linf},
      {"s73", "|e_x|_2", 0.0083, c.ex_l2.value_or(NAN)},
      {"s73", "|e_x|_inf", 0.0083, c.ex_linf.value_or(NAN)},
      {"s74", "|u|_2", 894.6961, d.u_l2},        {"s74", "|u|_inf", 73.1680, d.u_linf},
      {"s74", "|e_y|_2", 25.8225, d.ey_l2},      {"s74", "|e_y|_inf", 2.4259, d.ey_linf}};
  int ok = 0;
  std::string misses;
  for (const auto& cell : cells) {
    const double ratio = cell.ours / cell.paper;
    if (ratio >= 1.0 / 3.0 && ratio <= 3.0) ++ok;
    else misses += fmt::format(" {} {} {:.4g} vs {:.4g} ({:.1f}x);", cell.row, cell.col, cell.ours, cell.paper, ratio);
  }
  const bool ordering = b.u_l2 < a.u_l2 && b.u_linf < a.u_linf && c.u_l2 < a.u_l2;
  report("info", ok == static_cast<int>(cells.size()) && ordering,
         fmt::format("reference norms within a factor of 3 on {}/{} cells (saturated |u|_inf cells excluded);"
                     " saturated |u| below unsaturated: {}.{}",
                     ok, cells.size(), ordering ? "yes" : "no", misses.empty() ? "" : " Outside:" + misses),
         false);
}

void bound_tightening() {
  Scenario a = load_scenario(kConfigs / "s72.cfg");
  Scenario b = a;
  b.tsmc.sat->u_max = 5.0;
  const auto ta = run_scenario(a).report.settling, tb = run_scenario(b).report.settling;
  const bool ok = ta && (!tb || *tb >= *ta);
  report("info", ok,
         fmt::format("tightening u_max 10 -> 5 on s72 does not shorten settling: {} -> {}", fmt_ts(ta), fmt_ts(tb)),
         false);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-presto-cli>\n");
    return 2;
  }
  std::map<std::string, RunReport> runs;
  settling_criteria(runs);
  parameter_convergence(runs);
  observer_prescribed_time();
  sliding_dynamics();
  quadrature();
  ekf_algebra();
  pso_sanity();
  determinism(argv[1]);
  norm_agreement(runs);
  bound_tightening();
  fmt::print("{} gating criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
