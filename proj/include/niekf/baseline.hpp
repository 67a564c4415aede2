#pragma once

#include <vector>

#include <Eigen/Core>

#include "niekf/filter.hpp"
#include "niekf/kinematics.hpp"
#include "niekf/liegroup.hpp"
#include "niekf/models.hpp"
#include "niekf/sensor_log.hpp"

namespace niekf {

using Mat12 = Eigen::Matrix<double, 12, 12>;
using Tangent12 = Eigen::Matrix<double, 12, 1>;

/// Tuning of the static-rigid-surface (SRS) contact-aided filter.
struct SrsNoise {
  double sd_omega = 0.01;
  double sd_accel = 0.3;
  /// Joint-angle noise feeding the forward-kinematics measurement (rad).
  double sd_encoder = 0.017453292519943295;
  /// Random-walk rate of the world-frame contact point (m/s).
  double sd_contact = 0.01;
};

/// World-frame base state plus one contact point, error ordering
/// (rotation, velocity, position, contact).
struct SrsState {
  SE23 X;
  Vec3 d = Vec3::Zero();
  Mat12 P = Mat12::Identity();
  double t = 0.0;
};

struct SrsConfig {
  SrsNoise noise;
  Vec3 gravity{0.0, 0.0, -9.81};
  SE23 initial_state;
  /// Covariance diagonal of (rotation, velocity, position); the contact block
  /// is initialised from the position block and the first kinematic reading.
  Tangent9 initial_cov_diag = Tangent9::Ones();
  double reorthonormalize_threshold = 1e-8;
  double max_condition = 1e12;
};

/// Ad of the SE_3(3) element (R, v, p, d).
Mat12 srs_adjoint(const SrsState& state);

/// Strapdown propagation in a world frame with gravity `g`; the contact point
/// is held.
SrsState srs_propagate(const SrsState& state, const ImuSample& u_b, double dt,
                       const SrsNoise& noise, const Vec3& gravity);

struct SrsUpdateResult {
  SrsState state;
  Vec3 innovation = Vec3::Zero();
  bool applied = false;
};

/// Right-invariant update with the forward-kinematics contact position
/// d - p = R s(q).
SrsUpdateResult srs_update(const SrsState& state, const JointState& joint,
                           const KinematicChain& chain, const SrsNoise& noise,
                           double max_condition = 1e12);

/// Place the contact point from the first kinematic reading and extend the
/// 9x9 covariance to 12x12.
SrsState srs_initialize(const SE23& x, const Mat9& P, double t, const JointState& joint,
                        const KinematicChain& chain, const SrsNoise& noise);

/// Same driver contract as `run`; the ground IMU stream is ignored.
RunResult srs_run(const SensorLog& log, const SrsConfig& config, const KinematicChain& chain);

}  // namespace niekf
