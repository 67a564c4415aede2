#pragma once

#include <Eigen/Core>

#include "niekf/kinematics.hpp"
#include "niekf/liegroup.hpp"

namespace niekf {

enum class Frame { RobotB, GroundD };

/// One IMU reading: body angular rate and specific force.
struct ImuSample {
  double t = 0.0;
  Vec3 omega = Vec3::Zero();
  Vec3 accel = Vec3::Zero();
  Frame frame = Frame::RobotB;
};

/// Per-axis white-noise standard deviations.
struct NoiseParams {
  double sd_omega_B = 0.01;
  double sd_accel_B = 0.1;
  double sd_omega_D = 0.01;
  double sd_accel_D = 0.1;
  /// Lumped foot-velocity noise on the leg-odometry observation.
  double sd_contact_vel = 0.1;

  void validate() const;
};

using Mat3x9 = Eigen::Matrix<double, 3, 9>;

/// [[hat(omega), a, 0], [0, 0, 1], [0, 0, 0]]
Mat5 build_U(const ImuSample& sample);

/// Noise-free drift of the relative state: -U_D X + X U_B.
/// Throws std::invalid_argument if the samples are tagged with the wrong
/// frames.
Mat5 process_f(const Mat5& x, const ImuSample& u_b, const ImuSample& u_d);

/// Leg-odometry observation built from robot-side sensing only:
/// hat(omega_B) s(q) + J(q) qdot.
Vec3 measurement_y(const Vec3& omega_b, const JointState& joint, const KinematicChain& chain);

/// Predicted observation R^T (hat(omega_D) R s(q) - v + hat(omega_D) p).
Vec3 measurement_h(const SE23& x, const Vec3& omega_d, const JointState& joint,
                   const KinematicChain& chain);

/// Linearization of measurement_h for the right-invariant error, so that
/// H xi ~ h(Xbar) - h(exp(-xi) Xbar).
Mat3x9 jacobian_H(const SE23& x_bar, const Vec3& omega_d, const JointState& joint,
                  const KinematicChain& chain);

/// The c_t block (first three columns of jacobian_H) for a given foot
/// vector s = s(q).
Mat3 contact_rotation_block(const SE23& x_bar, const Vec3& omega_d, const Vec3& s);

/// Error-dynamics matrix of the log error.
Mat9 matrix_A(const Vec3& omega_d, const Vec3& accel_d);

/// exp(A dt) assembled block-wise; throws std::invalid_argument for dt <= 0.
Mat9 phi_blocks(const Vec3& omega_d, const Vec3& accel_d, double dt);

/// Ad_X Cov(w_B) Ad_X^T + Cov(w_D).
Mat9 qbar(const SE23& x_bar, const NoiseParams& noise);

/// Cov(w_i) for one IMU: diag(sd_w^2 I, sd_a^2 I, 0).
Mat9 imu_noise_cov(double sd_omega, double sd_accel);

}  // namespace niekf
