#pragma once

#include <Eigen/Dense>

namespace presto {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Discrete EKF over the augmented state (x1, x2, K1) of the beam model with
/// a random-walk parameter.
struct EkfConfig {
  double Ts = 1e-4;
  /// Per-step process-noise covariance.
  Mat3 Q = Vec3(1e-4, 1e-4, 1e-2).asDiagonal();
  double R = 1e-2;
  Mat3 P0 = Vec3(1.0, 1.0, 1e4).asDiagonal();
  Vec3 x0_hat{1.0, 5.0, 20.0};

  /// Ts > 0, R >= 0, Q and P0 symmetric positive semidefinite.
  void validate() const;
};

struct EkfState {
  Vec3 x_hat = Vec3::Zero();
  Mat3 P = Mat3::Identity();
};

EkfState ekf_init(const EkfConfig& cfg);

/// Explicit Euler map: x1 + Ts x2, x2 + Ts (-K1 x1 - K2 x1^3 - g u), K1.
Vec3 augmented_transition(const Vec3& x_hat, double u, double Ts, double K2, double g);

Mat3 transition_jacobian(const Vec3& x_hat, double Ts, double K2);

EkfState ekf_predict(const EkfState& st, double u, const EkfConfig& cfg, double K2, double g);

struct EkfUpdate {
  EkfState state;
  double innovation = 0.0;
  Vec3 gain = Vec3::Zero();
  double S = 0.0;
};

/// Correction with y = x1 + v. Throws SingularInnovationError when S <= 0.
EkfUpdate ekf_update(const EkfState& st, double y, const EkfConfig& cfg);

/// Symmetrise and floor the diagonal at zero.
Mat3 condition_covariance(const Mat3& P);

}  // namespace presto
