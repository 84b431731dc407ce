#pragma once

#include "presto/mathcore.hpp"

namespace presto {

/// Gains of the finite-time disturbance observer
///   d_hat = -k s - beta0 sgn(s) - eps s^{p0/q0} - |f| sgn(s) - f
///   z'    = -k s - beta0 sgn(s) - eps s^{p0/q0} - |f| sgn(s) + forcing
/// with s = z - x_n. The forcing is b(x) u for the plain observer and the
/// virtual input v_r when the actuator saturates (compound disturbance).
struct ObserverGains {
  double k = 4.0;
  double beta0 = 7.0;
  double eps = 10.0;
  ExponentPair e0{1, 7};
  /// 0 keeps the exact signum; > 0 replaces it by clamp(s / width, -1, 1).
  double smooth_sgn_width = 0.0;

  /// Throws DomainError when a gain is non-positive or e0 is not a valid pair.
  void validate() const;
};

struct ObserverState {
  double z = 0.0;
  double s = 0.0;
  double d_hat = 0.0;
};

/// z = x_n so that s starts at zero; d_hat is the estimate at s = 0.
ObserverState observer_init(double x_n, double fx = 0.0, const ObserverGains& gains = {});

double z_derivative(const ObserverState& st, double fx, double forcing, const ObserverGains& gains);
double disturbance_estimate(const ObserverState& st, double fx, const ObserverGains& gains);

/// Recomputes s = z - x_n and d_hat for the current measurement.
ObserverState observer_sync(ObserverState st, double x_n, double fx, const ObserverGains& gains);

/// Explicit Euler step of z with the current s, then re-synchronises
/// against the new measurement x_n.
ObserverState observer_advance(const ObserverState& st, double x_n, double fx, double forcing,
                               const ObserverGains& gains, double dt);

/// Lyapunov bound constants (theta, xi, gamma) for V0 = s^2/2 from the
/// observer gains, with V0 computed from s0.
TimeBoundInputs observer_time_constants(const ObserverGains& gains, double s0, double t0 = 0.0);

}  // namespace presto
