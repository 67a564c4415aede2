#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "niekf/kinematics.hpp"
#include "niekf/liegroup.hpp"
#include "niekf/models.hpp"
#include "niekf/sensor_log.hpp"

namespace niekf {

/// Treadmill-style ground: sinusoidal pitch about `pitch_axis` through the
/// ground-frame origin plus a cosine sway translation along `sway_axis`
/// (world frame). `spin_rate` adds a constant turn about the same axis.
struct GroundMotionParams {
  double pitch_amplitude = 10.0 * std::numbers::pi / 180.0;
  double pitch_frequency = std::numbers::pi / 2.0;
  double sway_amplitude = 0.05;
  double sway_frequency = std::numbers::pi / 2.0;
  double spin_rate = 0.0;
  Vec3 pitch_axis = Vec3::UnitY();
  Vec3 sway_axis = Vec3::UnitX();
  Vec3 gravity{0.0, 0.0, -9.81};

  static GroundMotionParams stationary();
  void validate() const;
};

/// World-frame pose and rates of a rigid frame; `omega`/`alpha` are body
/// angular velocity and acceleration, `v`/`a` world linear rates.
struct FrameKinematics {
  Mat3 R = Mat3::Identity();
  Vec3 omega = Vec3::Zero();
  Vec3 alpha = Vec3::Zero();
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 a = Vec3::Zero();
};

FrameKinematics ground_motion(double t, const GroundMotionParams& params);

struct SensorRig {
  double robot_rate = 500.0;
  double ground_rate = 200.0;
  double encoder_rate = 500.0;
  /// IMU noise SDs per sample; `sd_contact_vel` is unused here.
  NoiseParams noise;
  double sd_q = 1.0 * std::numbers::pi / 180.0;
  double sd_qdot = 0.05;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Base pose relative to the ground frame plus joint angles, for a robot
/// standing with its foot fixed on the ground.
struct StandingPose {
  Mat3 R = Mat3::Identity();
  Vec3 p{0.0, 0.0, 1.0};
  VecX q;
};

/// Relative base motion in {D}: orientation with body rate and its
/// derivative, position with two derivatives, and joint angles/rates.
struct RelativeKinematics {
  Mat3 R = Mat3::Identity();
  Vec3 omega = Vec3::Zero();
  Vec3 omega_dot = Vec3::Zero();
  Vec3 p = Vec3::Zero();
  Vec3 p_dot = Vec3::Zero();
  Vec3 p_ddot = Vec3::Zero();
  VecX q;
  VecX qdot;
};

/// Hook for non-standing relative trajectories (e.g. splines). The caller
/// must keep the foot consistent with the trajectory.
using RelativeTrajectory = std::function<RelativeKinematics(double t)>;

struct Scenario {
  GroundMotionParams ground;
  SensorRig rig;
  KinematicChain chain;
  StandingPose pose;
  double duration = 10.0;
  /// Empty means standing still at `pose`.
  RelativeTrajectory relative;

  void validate() const;
};

struct GroundTruthRecord {
  double t = 0.0;
  SE23 relative;  ///< (R, v, p) of {B} relative to {D}
  FrameKinematics ground;
  FrameKinematics base;
  Vec3 foot = Vec3::Zero();  ///< d_t, foot position in {D}
};

/// Number of samples on [0, duration) at `rate`.
std::size_t sample_count(double rate, double duration);

RelativeKinematics relative_motion(double t, const Scenario& scenario);

/// Throws std::invalid_argument if t is outside [0, duration].
GroundTruthRecord ground_truth(double t, const Scenario& scenario);

/// Noise-free specific force and body rate of the frame.
ImuSample ideal_imu(const FrameKinematics& frame, const Vec3& gravity, double t, Frame tag);

/// Sample `index` of each stream; noise is added when the rig SDs are
/// non-zero. These are pure functions of (scenario, index).
ImuSample robot_imu_sample(const Scenario& scenario, std::size_t index);
ImuSample ground_imu_sample(const Scenario& scenario, std::size_t index);
JointState encoder_sample(const Scenario& scenario, std::size_t index);

struct SimulationLogs {
  SensorLog sensors;
  /// One record per robot-IMU sample.
  std::vector<GroundTruthRecord> truth;
};

SimulationLogs synthesize_sensors(const Scenario& scenario);

/// Six-joint serial leg (hip roll/yaw/pitch, knee, ankle pitch/roll) of a
/// roughly 1 m tall biped.
KinematicChain biped_leg_chain();

/// The treadmill experiment: sinusoidal pitch and sway, a robot standing
/// with bent knees off the pitch axis, 10 s at the default sensor rates.
Scenario treadmill_scenario(std::uint64_t seed = 0);

/// Initial estimation error: error rotation R_bar R^T as intrinsic Z-Y-X
/// angles (rad), plus velocity and position offsets.
struct InitialError {
  Vec3 rpy = Vec3::Zero();
  Vec3 dv = Vec3::Zero();
  Vec3 dp = Vec3::Zero();
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct InitialErrorRanges {
  Interval rot{-23.0 * std::numbers::pi / 180.0, 23.0 * std::numbers::pi / 180.0};
  Interval vel{-1.0, 1.0};
  Interval pos{-3.0, 3.0};

  /// Throws std::invalid_argument unless lo <= hi for every interval.
  void validate() const;
};

/// Each component uniform on its interval; a pure function of
/// (seed, trial).
InitialError sample_initial_error(std::uint64_t seed, std::uint64_t trial,
                                  const InitialErrorRanges& ranges);

SE23 apply_initial_error(const SE23& truth, const InitialError& error);

/// Rotation from intrinsic Z-Y-X angles (roll, pitch, yaw).
Mat3 rotation_from_rpy(const Vec3& rpy);

}  // namespace niekf
