#include "presto/plant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include "presto/errors.hpp"

namespace presto {

namespace {
constexpr double kPi = std::numbers::pi;
}

void PlantParams::validate() const {
  if (!std::isfinite(K1) || !std::isfinite(K2) || !std::isfinite(g))
    throw DomainError("plant coefficients must be finite");
  if (g == 0.0) throw DomainError("plant input coefficient g must be non-zero");
}

State2 plant_derivative(const State2& x, double u, double d, const PlantParams& pp) {
  const double x1 = x[0];
  return {x[1], -pp.K1 * x1 - pp.K2 * x1 * x1 * x1 - pp.g * u + d};
}

State2 plant_step(const State2& x, double u, double d, const PlantParams& pp, double dt, Integrator scheme) {
  if (scheme == Integrator::euler) {
    const State2 k = plant_derivative(x, u, d, pp);
    return {x[0] + dt * k[0], x[1] + dt * k[1]};
  }
  auto shifted = [&](const State2& k, double h) { return State2{x[0] + h * k[0], x[1] + h * k[1]}; };
  const State2 k1 = plant_derivative(x, u, d, pp);
  const State2 k2 = plant_derivative(shifted(k1, 0.5 * dt), u, d, pp);
  const State2 k3 = plant_derivative(shifted(k2, 0.5 * dt), u, d, pp);
  const State2 k4 = plant_derivative(shifted(k3, dt), u, d, pp);
  return {x[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
          x[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

double DisturbanceSpec::bound() const {
  if (tabulated()) {
    double m = 0.0;
    for (double v : table_d) m = std::max(m, std::fabs(v));
    return m;
  }
  double b = 0.0;
  for (const auto& term : terms) b += std::fabs(term.amplitude);
  return b;
}

double disturbance_value(const DisturbanceSpec& spec, double t) {
  if (spec.tabulated()) {
    const auto& ts = spec.table_t;
    const auto& ds = spec.table_d;
    if (t <= ts.front()) return ds.front();
    if (t >= ts.back()) return ds.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
    return ds[lo] + w * (ds[hi] - ds[lo]);
  }
  double d = 0.0;
  for (const auto& term : spec.terms) {
    switch (term.kind) {
      case DisturbanceTerm::Kind::sin_linear:
        d += term.amplitude * std::sin(term.rate * kPi * t);
        break;
      case DisturbanceTerm::Kind::sin_sqrt:
        d += term.amplitude * std::sin(term.rate * std::sqrt(t + 1.0));
        break;
    }
  }
  return d;
}

double deflection_field(double Q, double xbar) {
  if (!(xbar >= 0.0 && xbar <= 1.0)) throw DomainError(fmt::format("deflection_field: xbar={} outside [0, 1]", xbar));
  // sin(pi) is not exactly zero in floating point.
  if (xbar == 0.0 || xbar == 1.0) return 0.0;
  return Q * std::sin(kPi * xbar);
}

void BeamParams::validate() const {
  if (!(alpha >= 0.0)) throw DomainError("beam alpha must be >= 0");
  if (!(beta >= 0.0)) throw DomainError("beam beta must be >= 0");
  if (!(lambda > 0.0)) throw DomainError("beam lambda must be > 0");
  if (quadrature_points < 8) throw DomainError("beam quadrature_points must be >= 8");
}

ModeIntegrals mode_integrals(int n_points) {
  if (n_points < 8) throw DomainError("mode_integrals: n_points must be >= 8");
  using Rule = boost::math::quadrature::gauss<double, 7>;
  const double h = 1.0 / n_points;
  auto integrate = [&](auto&& f) {
    double acc = 0.0;
    for (int i = 0; i < n_points; ++i) acc += Rule::integrate(f, i * h, (i + 1) * h);
    return acc;
  };
  // Derivatives of sin(pi x): phi^(k) = pi^k sin(pi x + k pi / 2).
  auto d = [](int k, double x) { return std::pow(kPi, k) * std::sin(kPi * x + k * kPi / 2.0); };
  ModeIntegrals mi;
  mi.I_pp2 = integrate([&](double x) { return d(1, x) * d(1, x); });
  mi.I_dd = integrate([&](double x) { return d(2, x) * d(0, x); });
  mi.I_4 = integrate([&](double x) { return d(4, x) * d(0, x); });
  mi.I_6 = integrate([&](double x) { return d(6, x) * d(0, x); });
  mi.I_3p = integrate([&](double x) { return d(3, x) * d(1, x); });
  mi.I_pp2sq = integrate([&](double x) { return d(2, x) * d(2, x); });
  mi.I_00 = integrate([&](double x) { return d(0, x) * d(0, x); });
  return mi;
}

PlantParams galerkin_from_integrals(const BeamParams& bp, const ModeIntegrals& mi, MassTerm mass) {
  bp.validate();
  constexpr double D_xx = 1.0, A_xx = 1.0, I_A = 1.0;
  const double a2 = bp.alpha * bp.alpha;
  const double b2 = bp.beta * bp.beta;
  const double inertia = mass == MassTerm::slope_squared ? mi.I_pp2 : mi.I_00;
  const double den = a2 * I_A * mi.I_dd - I_A * inertia;
  if (!std::isfinite(den) || std::fabs(den) < 1e-300)
    throw SingularModelError("Galerkin denominator vanishes for the given beam parameters");

  const double stretching = mi.I_3p + mi.I_pp2sq;
  PlantParams pp;
  pp.K1 = (b2 * D_xx * mi.I_6 - D_xx * mi.I_4) / den;
  pp.K2 = (0.5 * A_xx * mi.I_pp2 * mi.I_dd - b2 * A_xx * stretching * mi.I_dd) / den -
          (0.5 * a2 * A_xx * mi.I_pp2 * mi.I_4 - a2 * b2 * A_xx * stretching * mi.I_4) / den;
  pp.g = bp.lambda * (a2 * kPi * kPi + 1.0) / den;
  return pp;
}

PlantParams galerkin_coefficients(const BeamParams& bp, MassTerm mass) {
  bp.validate();
  return galerkin_from_integrals(bp, mode_integrals(bp.quadrature_points), mass);
}

MassTerm parse_mass_term(const std::string& s) {
  if (s == "slope_squared") return MassTerm::slope_squared;
  if (s == "phi_squared") return MassTerm::phi_squared;
  throw ConfigError(fmt::format("unknown mass_term '{}' (expected slope_squared or phi_squared)", s));
}

std::string to_string(MassTerm m) { return m == MassTerm::slope_squared ? "slope_squared" : "phi_squared"; }

}  // namespace presto
