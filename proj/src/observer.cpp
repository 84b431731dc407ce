#include "presto/observer.hpp"

#include <algorithm>
#include <cmath>

#include "presto/errors.hpp"

namespace presto {

void ObserverGains::validate() const {
  if (!(k > 0.0)) throw DomainError("observer gain k must be > 0");
  if (!(beta0 > 0.0)) throw DomainError("observer gain beta0 must be > 0");
  if (!(eps > 0.0)) throw DomainError("observer gain eps must be > 0");
  if (!is_valid_exponent_pair(e0)) throw DomainError("observer exponent p0/q0 must be odd positive integers with p0 < q0");
  if (!(smooth_sgn_width >= 0.0)) throw DomainError("observer smooth_sgn_width must be >= 0");
}

namespace {

double switching(double s, const ObserverGains& gains) {
  if (gains.smooth_sgn_width > 0.0) return std::clamp(s / gains.smooth_sgn_width, -1.0, 1.0);
  return sgn(s);
}

// Every term shared by the estimate and the internal dynamics.
double correction(double s, double fx, const ObserverGains& gains) {
  const double sw = switching(s, gains);
  return -gains.k * s - gains.beta0 * sw - gains.eps * signed_pow(s, gains.e0) - std::fabs(fx) * sw;
}

}  // namespace

ObserverState observer_init(double x_n, double fx, const ObserverGains& gains) {
  ObserverState st{x_n, 0.0, 0.0};
  st.d_hat = disturbance_estimate(st, fx, gains);
  return st;
}

double z_derivative(const ObserverState& st, double fx, double forcing, const ObserverGains& gains) {
  return correction(st.s, fx, gains) + forcing;
}

double disturbance_estimate(const ObserverState& st, double fx, const ObserverGains& gains) {
  return correction(st.s, fx, gains) - fx;
}

ObserverState observer_sync(ObserverState st, double x_n, double fx, const ObserverGains& gains) {
  st.s = st.z - x_n;
  st.d_hat = disturbance_estimate(st, fx, gains);
  return st;
}

ObserverState observer_advance(const ObserverState& st, double x_n, double fx, double forcing,
                               const ObserverGains& gains, double dt) {
  if (!(dt > 0.0)) throw DomainError("observer_advance: dt must be > 0");
  ObserverState next = st;
  next.z = st.z + dt * z_derivative(st, fx, forcing, gains);
  return observer_sync(next, x_n, fx, gains);
}

TimeBoundInputs observer_time_constants(const ObserverGains& gains, double s0, double t0) {
  return finite_time_constants(gains.k, gains.eps, gains.e0, s0, t0);
}

}  // namespace presto
