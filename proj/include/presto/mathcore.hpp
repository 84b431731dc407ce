#pragma once

#include <cstdint>

namespace presto {

/// Fractional exponent p/q with p, q odd positive integers and p < q, so that
/// s^{p/q} is real for negative s.
struct ExponentPair {
  std::int64_t p = 1;
  std::int64_t q = 1;

  constexpr double ratio() const { return static_cast<double>(p) / static_cast<double>(q); }
  friend constexpr bool operator==(const ExponentPair&, const ExponentPair&) = default;
};

/// True iff p and q are odd, positive and p < q.
bool is_valid_exponent_pair(const ExponentPair& e);

/// Signum with sgn(0) = 0. Throws DomainError on non-finite input.
int sgn(double x);

/// Real odd root sign(s)*|s|^{p/q}.
double signed_pow(double s, const ExponentPair& e);

/// Constants of a Lyapunov inequality V' + theta V + xi V^gamma <= 0.
struct TimeBoundInputs {
  double theta = 1.0;
  double xi = 1.0;
  double gamma = 0.5;
  double V0 = 0.0;
  double t0 = 0.0;
};

/// Upper bound on the convergence time of V under the inequality above:
///   t0 + ln((theta V0^{1-gamma} + xi) / xi) / (theta (1 - gamma)).
double prescribed_time_bound(const TimeBoundInputs& in);

/// Bound constants for V = s^2/2 under s' = -a s - b s^{p/q} (plus terms that
/// only make V' more negative): theta = 2a, xi = b 2^{(p+q)/2q},
/// gamma = (p+q)/2q.
TimeBoundInputs finite_time_constants(double linear_gain, double power_gain,
                                      const ExponentPair& e, double s0, double t0 = 0.0);

/// Nonsingularity gate for the j-th sliding layer of an n-th order system:
/// valid pair and p/q > (n-j)/(n-j+1).
bool check_exponent_pair(const ExponentPair& e, int n, int j);

}  // namespace presto
