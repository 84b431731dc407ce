#include "presto/estimator.hpp"

#include <cmath>

#include "presto/errors.hpp"

namespace presto {

namespace {

bool symmetric_psd(const Mat3& M) {
  if (!M.allFinite()) return false;
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + M.cwiseAbs().maxCoeff())) return false;
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() >= -1e-12 * (1.0 + M.cwiseAbs().maxCoeff());
}

}  // namespace

void EkfConfig::validate() const {
  if (!(Ts > 0.0)) throw DomainError("EKF sample time Ts must be > 0");
  if (!(R >= 0.0)) throw DomainError("EKF measurement covariance R must be >= 0");
  if (!symmetric_psd(Q)) throw DomainError("EKF process covariance Q must be symmetric positive semidefinite");
  if (!symmetric_psd(P0)) throw DomainError("EKF initial covariance P0 must be symmetric positive semidefinite");
  if (!x0_hat.allFinite()) throw DomainError("EKF initial estimate must be finite");
}

EkfState ekf_init(const EkfConfig& cfg) { return EkfState{cfg.x0_hat, cfg.P0}; }

Vec3 augmented_transition(const Vec3& x, double u, double Ts, double K2, double g) {
  const double x1 = x(0);
  return Vec3(x1 + Ts * x(1), x(1) + Ts * (-x(2) * x1 - K2 * x1 * x1 * x1 - g * u), x(2));
}

Mat3 transition_jacobian(const Vec3& x, double Ts, double K2) {
  const double x1 = x(0);
  Mat3 F;
  F << 1.0, Ts, 0.0,
       Ts * (-x(2) - 3.0 * K2 * x1 * x1), 1.0, Ts * (-x1),
       0.0, 0.0, 1.0;
  return F;
}

Mat3 condition_covariance(const Mat3& P) {
  Mat3 out = 0.5 * (P + P.transpose());
  for (int i = 0; i < 3; ++i)
    if (out(i, i) < 0.0) out(i, i) = 0.0;
  return out;
}

EkfState ekf_predict(const EkfState& st, double u, const EkfConfig& cfg, double K2, double g) {
  // Linearise at the filtered estimate before propagating the mean.
  const Mat3 F = transition_jacobian(st.x_hat, cfg.Ts, K2);
  EkfState next;
  next.x_hat = augmented_transition(st.x_hat, u, cfg.Ts, K2, g);
  next.P = condition_covariance(F * st.P * F.transpose() + cfg.Q);
  return next;
}

EkfUpdate ekf_update(const EkfState& st, double y, const EkfConfig& cfg) {
  // H = [1 0 0]
  const double S = st.P(0, 0) + cfg.R;
  if (!(S > 0.0) || !std::isfinite(S)) throw SingularInnovationError("EKF innovation covariance is not positive");
  EkfUpdate out;
  out.S = S;
  out.innovation = y - st.x_hat(0);
  out.gain = st.P.col(0) / S;
  out.state.x_hat = st.x_hat + out.gain * out.innovation;
  out.state.P = condition_covariance(st.P - out.gain * S * out.gain.transpose());
  return out;
}

}  // namespace presto
