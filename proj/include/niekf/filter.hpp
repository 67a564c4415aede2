#pragma once

#include <array>
#include <vector>

#include "niekf/kinematics.hpp"
#include "niekf/liegroup.hpp"
#include "niekf/models.hpp"
#include "niekf/sensor_log.hpp"

namespace niekf {

/// Estimate of the robot state relative to the moving ground.
struct FilterState {
  SE23 X;  ///< Xbar
  Mat9 P = Mat9::Identity();
  double t = 0.0;
  /// Process noise used by `propagate`.
  NoiseParams noise;
};

enum class GroundHold { ZeroOrderHold };

struct FilterConfig {
  NoiseParams noise;
  SE23 initial_state;
  Tangent9 initial_cov_diag = Tangent9::Ones();
  GroundHold ground_hold = GroundHold::ZeroOrderHold;
  double reorthonormalize_threshold = 1e-8;
  /// Updates whose innovation covariance exceeds this condition number are
  /// skipped.
  double max_condition = 1e12;

  void validate() const;
};

/// exp(U dt) for one IMU sample, as a 5x5 matrix (its (4,5) entry is dt).
Mat5 zmatrix(const ImuSample& sample, double dt);
/// exp(-U dt), the closed-form inverse of zmatrix.
Mat5 zmatrix_inverse(const ImuSample& sample, double dt);

/// Xbar <- Z_D^-1 Xbar Z_B on the group only; no covariance.
SE23 propagate_mean(const SE23& x, const ImuSample& u_b, const ImuSample& u_d, double dt);

/// Discretized propagation; P+ = Phi P Phi^T + Phi Qbar Phi^T dt. Throws
/// std::invalid_argument for dt <= 0 or wrong frames and std::runtime_error
/// for non-finite inputs.
FilterState propagate(const FilterState& state, const ImuSample& u_b, const ImuSample& u_d,
                      double dt, double reorthonormalize_threshold = 1e-8);

struct UpdateResult {
  FilterState state;
  Vec3 innovation = Vec3::Zero();
  Mat3x9 H = Mat3x9::Zero();
  Eigen::Matrix<double, 9, 3> K = Eigen::Matrix<double, 9, 3>::Zero();
  bool applied = false;
};

/// Leg-odometry velocity update with Joseph-form covariance.
UpdateResult update(const FilterState& state, const JointState& joint, const Vec3& omega_b,
                    const Vec3& omega_d, const KinematicChain& chain, const NoiseParams& noise,
                    double max_condition = 1e12);

/// One row of an estimate trace.
struct TraceRecord {
  double t = 0.0;
  SE23 X;
  Eigen::Matrix<double, 9, 1> P_diag = Eigen::Matrix<double, 9, 1>::Zero();
  double innovation_norm = 0.0;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  std::size_t skipped_updates = 0;
  FilterState final_state;
};

/// Steps the filter at the robot-IMU rate; the ground IMU is held between
/// samples and an update runs whenever a new encoder sample has arrived.
RunResult run(const SensorLog& log, const FilterConfig& config, const KinematicChain& chain);

}  // namespace niekf
