#include "presto/controller.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "presto/errors.hpp"

namespace presto {

namespace {

constexpr double kPowerGuard = 1e-12;

// Truncated Taylor series: c[k] = x^(k)(t) / k!.
using Jet = std::vector<double>;

Jet derivative(const Jet& a) {
  Jet d(a.size() > 1 ? a.size() - 1 : 0);
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = static_cast<double>(k + 1) * a[k + 1];
  return d;
}

// Series of sign(a)|a|^gamma from the power recurrence
//   h_k = 1/(k a_0) sum_{j=1..k} ((gamma + 1) j - k) a_j h_{k-j}.
Jet signed_pow_jet(const Jet& a, const ExponentPair& e) {
  Jet h(a.size(), 0.0);
  if (a.empty()) return h;
  h[0] = signed_pow(a[0], e);
  if (std::fabs(a[0]) < kPowerGuard) return h;
  const double gamma = e.ratio();
  for (std::size_t k = 1; k < a.size(); ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j)
      acc += ((gamma + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * a[j] * h[k - j];
    h[k] = acc / (static_cast<double>(k) * a[0]);
  }
  return h;
}

double factorial(std::size_t m) {
  double f = 1.0;
  for (std::size_t i = 2; i <= m; ++i) f *= static_cast<double>(i);
  return f;
}

}  // namespace

void TsmcGains::validate() const {
  const int n = order();
  if (n < 2) throw DomainError("TSMC needs at least two exponent pairs (order n >= 2)");
  if (alphas.size() != static_cast<std::size_t>(n - 1) || betas.size() != static_cast<std::size_t>(n - 1))
    throw DomainError(fmt::format("TSMC of order {} needs {} alpha and beta gains", n, n - 1));
  for (int j = 1; j < n; ++j) {
    if (!(alphas[j - 1] > 0.0)) throw DomainError(fmt::format("TSMC gain alpha{} must be > 0", j));
    if (!(betas[j - 1] > 0.0)) throw DomainError(fmt::format("TSMC gain beta{} must be > 0", j));
    const auto& e = exps[j - 1];
    if (!check_exponent_pair(e, n, j))
      throw DomainError(fmt::format(
          "exponent (p{0},q{0})=({1},{2}) violates the nonsingularity condition p{0}/q{0} > {3}/{4} "
          "(p, q odd positive, p < q)",
          j, e.p, e.q, n - j, n - j + 1));
  }
  if (!is_valid_exponent_pair(exps.back()))
    throw DomainError(fmt::format("exponent (p{0},q{0}) must be odd positive integers with p{0} < q{0}", n));
  if (!(delta > 0.0)) throw DomainError("TSMC gain delta must be > 0");
  if (!(mu > 0.0)) throw DomainError("TSMC gain mu must be > 0");
  if (!(tau >= 0.0)) throw DomainError("TSMC gain tau must be >= 0");
  if (sat && !(sat->u_min < 0.0 && 0.0 < sat->u_max))
    throw DomainError("saturation bounds must satisfy u_min < 0 < u_max");
}

double ddt_signed_pow(double x, double xdot, const ExponentPair& e) {
  const double ax = std::fabs(x);
  if (ax < kPowerGuard) return 0.0;
  return e.ratio() * std::pow(ax, e.ratio() - 1.0) * xdot;
}

SlidingStack sliding_stack_n2(const State2& x, double s_obs, const TsmcGains& gains) {
  const double s1 = x[0];
  const double s1dot = x[1];
  const double s2 = s1dot + gains.alphas[0] * s1 + gains.betas[0] * signed_pow(s1, gains.exps[0]) + s_obs;
  return SlidingStack{{s1, s2}, {s1dot}};
}

StackTerms sliding_stack(std::span<const double> error_derivs, double s_obs, const TsmcGains& gains) {
  const std::size_t n = static_cast<std::size_t>(gains.order());
  if (error_derivs.size() != n)
    throw DomainError(fmt::format("sliding_stack: need {} error derivatives, got {}", n, error_derivs.size()));

  StackTerms out;
  Jet layer(n);
  for (std::size_t k = 0; k < n; ++k) layer[k] = error_derivs[k] / factorial(k);

  for (std::size_t j = 1; j < n; ++j) {
    const double alpha = gains.alphas[j - 1];
    const double beta = gains.betas[j - 1];
    const Jet powered = signed_pow_jet(layer, gains.exps[j - 1]);
    const std::size_t top = n - j;  // highest available order of this layer
    out.stack.s_values.push_back(layer[0]);
    out.stack.sdot_values.push_back(layer[1]);
    out.feedforward += factorial(top) * (alpha * layer[top] + beta * powered[top]);

    Jet next = derivative(layer);
    for (std::size_t k = 0; k < next.size(); ++k) next[k] += alpha * layer[k] + beta * powered[k];
    layer = std::move(next);
  }
  out.stack.s_values.push_back(layer[0] + s_obs);
  return out;
}

double tsmc_control_canonical(double fx, double b, double d_hat, const StackTerms& terms, const TsmcGains& gains) {
  if (b == 0.0) throw SingularInputError("TSMC law needs a non-zero input gain");
  const double sn = terms.stack.s_values.back();
  return -(fx + terms.feedforward + d_hat + gains.delta * sn + gains.mu * signed_pow(sn, gains.exps.back())) / b;
}

namespace {

StackTerms n2_terms(const SlidingStack& stack, const TsmcGains& gains) {
  const double s1 = stack.s_values[0];
  const double s1dot = stack.sdot_values[0];
  return StackTerms{stack, gains.alphas[0] * s1dot + gains.betas[0] * ddt_signed_pow(s1, s1dot, gains.exps[0])};
}

}  // namespace

double tsmc_control(const State2& x, double d_hat, const SlidingStack& stack, const PlantParams& pp,
                    const TsmcGains& gains) {
  return tsmc_control_canonical(pp.drift(x[0]), pp.input_gain(), d_hat, n2_terms(stack, gains), gains);
}

double saturate(double u_c, const SaturationBounds& sat) { return std::clamp(u_c, sat.u_min, sat.u_max); }

double regularized_input(double v_r, double b, double tau) { return b * v_r / (b * b + tau); }

SaturatedCommand saturated_tsmc_control(const State2& x, double D_hat, const SlidingStack& stack,
                                        const PlantParams& pp, const TsmcGains& gains) {
  const StackTerms terms = n2_terms(stack, gains);
  const double sn = stack.s_values.back();
  SaturatedCommand cmd;
  cmd.v_r = -pp.drift(x[0]) - terms.feedforward - D_hat - gains.delta * sn -
            gains.mu * signed_pow(sn, gains.exps.back());
  cmd.u_c = regularized_input(cmd.v_r, pp.input_gain(), gains.tau);
  cmd.u = gains.sat ? saturate(cmd.u_c, *gains.sat) : cmd.u_c;
  return cmd;
}

void SmcGains::validate() const {
  if (!(Y > 0.0)) throw DomainError("SMC surface slope Y must be > 0");
  if (!(eta > 0.0)) throw DomainError("SMC reaching gain eta must be > 0");
  if (!(Kg >= eta)) throw DomainError("SMC switching gain K must satisfy K >= eta");
  if (!(K1_min < K1_max)) throw DomainError("SMC uncertainty interval needs K1_min < K1_max");
}

SmcCommand smc_control(const State2& x, const SmcGains& gains, const PlantParams& pp, double K1_nominal) {
  if (pp.g == 0.0) throw SingularInputError("SMC law needs a non-zero input coefficient g");
  const double x1 = x[0];
  const double x2 = x[1];
  SmcCommand cmd;
  cmd.s = x2 + gains.Y * x1;
  cmd.u_eq = (gains.Y * x2 - K1_nominal * x1 - pp.K2 * x1 * x1 * x1) / pp.g;
  cmd.u_c = ((K1_nominal - gains.K1_min) * std::fabs(x1) + gains.Kg) / pp.g * sgn(cmd.s);
  cmd.u = cmd.u_eq + cmd.u_c;
  return cmd;
}

}  // namespace presto
