#pragma once

#include <optional>
#include <span>
#include <vector>

#include "presto/mathcore.hpp"
#include "presto/plant.hpp"

namespace presto {

struct SaturationBounds {
  double u_min = -30.0;
  double u_max = 10.0;
};

/// Gains of the nonsingular terminal sliding-mode controller for an n-th
/// order chain of integrators. alphas/betas hold layers 1..n-1; exps holds
/// (p_j, q_j) for j = 1..n, the last pair shaping the reaching law of s_n.
struct TsmcGains {
  std::vector<double> alphas{100.0};
  std::vector<double> betas{9.0};
  std::vector<ExponentPair> exps{{3, 5}, {1, 3}};
  double delta = 5.0;
  double mu = 1e-4;
  double tau = 0.0;
  std::optional<SaturationBounds> sat;

  int order() const { return static_cast<int>(exps.size()); }
  /// Positivity, list sizes, and the nonsingularity gate on each layer.
  /// Throws DomainError with a message naming the violated condition.
  void validate() const;
};

/// s_1..s_n and the derivatives of s_1..s_{n-1} used by the control law.
struct SlidingStack {
  std::vector<double> s_values;
  std::vector<double> sdot_values;
};

/// n = 2 stack for y_d = 0: s1 = x1, s1' = x2,
/// s2 = x2 + alpha1 x1 + beta1 x1^{p1/q1} + s_obs.
SlidingStack sliding_stack_n2(const State2& x, double s_obs, const TsmcGains& gains);

/// d/dt x^{p/q} = (p/q) |x|^{p/q - 1} x'; returns 0 when |x| < 1e-12.
double ddt_signed_pow(double x, double xdot, const ExponentPair& e);

/// Terms of the generic-order law that depend on the tracking error only:
/// sum_j alpha_j s_j^{(n-j)} + beta_j d^{(n-j)}/dt^{(n-j)} s_j^{p_j/q_j}.
struct StackTerms {
  SlidingStack stack;
  double feedforward = 0.0;
};

/// Generic-order sliding stack from the error and its first n-1 time
/// derivatives (for y_d = 0 these are the plant states x1..xn). Derivatives
/// of fractional powers are propagated through truncated Taylor series; a
/// layer value below 1e-12 in magnitude zeroes its power-derivative terms.
StackTerms sliding_stack(std::span<const double> error_derivs, double s_obs, const TsmcGains& gains);

/// u = -(1/b) (f + feedforward + d_hat + delta s_n + mu s_n^{p_n/q_n})
/// for the canonical plant x_n' = f + b u + d. Throws SingularInputError if b == 0.
double tsmc_control_canonical(double fx, double b, double d_hat, const StackTerms& terms,
                              const TsmcGains& gains);

/// Beam instance with f = -K1 x1 - K2 x1^3 and b = -g, evaluated with the
/// supplied (possibly estimated) coefficients.
double tsmc_control(const State2& x, double d_hat, const SlidingStack& stack, const PlantParams& pp,
                    const TsmcGains& gains);

double saturate(double u_c, const SaturationBounds& sat);

/// Regularised inversion u_c = b v_r / (b^2 + tau).
double regularized_input(double v_r, double b, double tau);

struct SaturatedCommand {
  double v_r = 0.0;
  double u_c = 0.0;
  double u = 0.0;
};

/// v_r = -f - feedforward - D_hat - delta s_n - mu s_n^{p_n/q_n};
/// u_c from the regularised inversion; u = clamp(u_c). The bounds act as the
/// actuator only and never enter the law.
SaturatedCommand saturated_tsmc_control(const State2& x, double D_hat, const SlidingStack& stack,
                                        const PlantParams& pp, const TsmcGains& gains);

// --- baseline ----------------------------------------------------------------

struct SmcGains {
  double Y = 2.0;
  double eta = 1.0;
  double Kg = 5.0;
  double K1_min = 94.8;
  double K1_max = 100.0;

  void validate() const;
};

struct SmcCommand {
  double s = 0.0;
  double u_eq = 0.0;
  double u_c = 0.0;
  double u = 0.0;
};

/// s = x2 + Y x1; u_eq = (Y x2 - K1n x1 - K2 x1^3)/g;
/// u_c = ((K1n - K1_min)|x1| + Kg) sgn(s) / g.
SmcCommand smc_control(const State2& x, const SmcGains& gains, const PlantParams& pp, double K1_nominal);

}  // namespace presto
