#include "presto/mathcore.hpp"

#include <cmath>

#include <fmt/format.h>

#include "presto/errors.hpp"

namespace presto {

bool is_valid_exponent_pair(const ExponentPair& e) {
  return e.p > 0 && e.q > 0 && (e.p % 2 == 1) && (e.q % 2 == 1) && e.p < e.q;
}

int sgn(double x) {
  if (!std::isfinite(x)) throw DomainError("sgn: non-finite argument");
  return (x > 0.0) - (x < 0.0);
}

double signed_pow(double s, const ExponentPair& e) {
  if (!std::isfinite(s)) throw DomainError("signed_pow: non-finite argument");
  if (s == 0.0) return 0.0;
  const double mag = std::pow(std::fabs(s), e.ratio());
  return s < 0.0 ? -mag : mag;
}

double prescribed_time_bound(const TimeBoundInputs& in) {
  if (!(in.theta > 0.0)) throw DomainError("prescribed_time_bound: theta must be > 0");
  if (!(in.xi > 0.0)) throw DomainError("prescribed_time_bound: xi must be > 0");
  if (!(in.gamma > 0.0 && in.gamma < 1.0)) throw DomainError("prescribed_time_bound: gamma must lie in (0, 1)");
  if (!(in.V0 >= 0.0)) throw DomainError("prescribed_time_bound: V0 must be >= 0");
  const double lifted = in.theta * std::pow(in.V0, 1.0 - in.gamma);
  return in.t0 + std::log1p(lifted / in.xi) / (in.theta * (1.0 - in.gamma));
}

TimeBoundInputs finite_time_constants(double linear_gain, double power_gain, const ExponentPair& e, double s0,
                                      double t0) {
  const double gamma = static_cast<double>(e.p + e.q) / (2.0 * static_cast<double>(e.q));
  return TimeBoundInputs{2.0 * linear_gain, power_gain * std::pow(2.0, gamma), gamma, 0.5 * s0 * s0, t0};
}

bool check_exponent_pair(const ExponentPair& e, int n, int j) {
  if (j < 1 || j > n) throw DomainError(fmt::format("check_exponent_pair: need 1 <= j <= n, got j={} n={}", j, n));
  if (!is_valid_exponent_pair(e)) return false;
  // p/q > (n-j)/(n-j+1) in exact integer arithmetic.
  const std::int64_t m = n - j;
  return e.p * (m + 1) > m * e.q;
}

}  // namespace presto
