#include "niekf/sim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "niekf/random.hpp"

namespace niekf {

namespace {

void require_unit(const Vec3& axis, const char* what) {
  if (std::abs(axis.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string(what) + " must be a unit vector");
  }
}

Vec3 gaussian3(const CounterRng& rng, std::uint64_t stream, std::size_t index, std::uint64_t lane0,
               double sd) {
  if (sd == 0.0) return Vec3::Zero();
  return sd * Vec3(rng.normal(stream, index, lane0), rng.normal(stream, index, lane0 + 1),
                   rng.normal(stream, index, lane0 + 2));
}

}  // namespace

GroundMotionParams GroundMotionParams::stationary() {
  GroundMotionParams params;
  params.pitch_amplitude = 0.0;
  params.sway_amplitude = 0.0;
  return params;
}

void GroundMotionParams::validate() const {
  if (!(pitch_frequency > 0.0) || !(sway_frequency > 0.0)) {
    throw std::invalid_argument("ground motion frequencies must be positive");
  }
  if (pitch_amplitude < 0.0 || sway_amplitude < 0.0) {
    throw std::invalid_argument("ground motion amplitudes must be non-negative");
  }
  require_unit(pitch_axis, "pitch axis");
  require_unit(sway_axis, "sway axis");
}

FrameKinematics ground_motion(double t, const GroundMotionParams& params) {
  const double wp = params.pitch_frequency;
  const double theta = params.pitch_amplitude * std::sin(wp * t) + params.spin_rate * t;
  const double theta_dot = params.pitch_amplitude * wp * std::cos(wp * t) + params.spin_rate;
  const double theta_ddot = -params.pitch_amplitude * wp * wp * std::sin(wp * t);
  const double ws = params.sway_frequency;
  const double amp = params.sway_amplitude;

  FrameKinematics g;
  g.R = exp_so3(params.pitch_axis * theta);
  // Single-axis rotation: the axis is the same in body and world.
  g.omega = params.pitch_axis * theta_dot;
  g.alpha = params.pitch_axis * theta_ddot;
  g.p = params.sway_axis * (amp * std::cos(ws * t));
  g.v = params.sway_axis * (-amp * ws * std::sin(ws * t));
  g.a = params.sway_axis * (-amp * ws * ws * std::cos(ws * t));
  return g;
}

void SensorRig::validate() const {
  if (!(robot_rate > 0.0) || !(ground_rate > 0.0) || !(encoder_rate > 0.0)) {
    throw std::invalid_argument("sensor rates must be positive");
  }
  noise.validate();
  if (sd_q < 0.0 || sd_qdot < 0.0) {
    throw std::invalid_argument("encoder noise must be non-negative");
  }
}

void Scenario::validate() const {
  ground.validate();
  rig.validate();
  chain.validate();
  if (!(duration > 0.0)) throw std::invalid_argument("duration must be positive");
  if (!relative && static_cast<std::size_t>(pose.q.size()) != chain.size()) {
    throw std::invalid_argument("standing pose joint count does not match the chain");
  }
}

std::size_t sample_count(double rate, double duration) {
  return static_cast<std::size_t>(std::ceil(duration * rate - 1e-9));
}

RelativeKinematics relative_motion(double t, const Scenario& scenario) {
  if (scenario.relative) return scenario.relative(t);
  RelativeKinematics rel;
  rel.R = scenario.pose.R;
  rel.p = scenario.pose.p;
  rel.q = scenario.pose.q;
  rel.qdot = VecX::Zero(scenario.pose.q.size());
  return rel;
}

GroundTruthRecord ground_truth(double t, const Scenario& scenario) {
  if (t < 0.0 || t > scenario.duration) {
    throw std::invalid_argument("ground_truth: t=" + std::to_string(t) +
                                " is outside the simulated horizon");
  }
  GroundTruthRecord rec;
  rec.t = t;
  const FrameKinematics g = ground_motion(t, scenario.ground);
  const RelativeKinematics rel = relative_motion(t, scenario);
  const Mat3 w = hat3(g.omega);

  FrameKinematics b;
  b.R = g.R * rel.R;
  b.omega = rel.R.transpose() * g.omega + rel.omega;
  b.alpha = -rel.omega.cross(rel.R.transpose() * g.omega) + rel.R.transpose() * g.alpha +
            rel.omega_dot;
  b.p = g.p + g.R * rel.p;
  b.v = g.v + g.R * (w * rel.p + rel.p_dot);
  b.a = g.a + g.R * (hat3(g.alpha) * rel.p + w * w * rel.p + 2.0 * w * rel.p_dot + rel.p_ddot);

  rec.ground = g;
  rec.base = b;
  rec.relative.R = g.R.transpose() * b.R;
  rec.relative.v = g.R.transpose() * (b.v - g.v);
  rec.relative.p = g.R.transpose() * (b.p - g.p);
  rec.foot = rel.p + rel.R * forward_kinematics(scenario.chain, rel.q);
  return rec;
}

ImuSample ideal_imu(const FrameKinematics& frame, const Vec3& gravity, double t, Frame tag) {
  ImuSample s;
  s.t = t;
  s.frame = tag;
  s.omega = frame.omega;
  s.accel = frame.R.transpose() * (frame.a - gravity);
  return s;
}

ImuSample robot_imu_sample(const Scenario& scenario, std::size_t index) {
  const double t = static_cast<double>(index) / scenario.rig.robot_rate;
  const GroundTruthRecord rec = ground_truth(t, scenario);
  ImuSample s = ideal_imu(rec.base, scenario.ground.gravity, t, Frame::RobotB);
  const CounterRng rng(scenario.rig.seed);
  s.omega += gaussian3(rng, kStreamRobotImu, index, 0, scenario.rig.noise.sd_omega_B);
  s.accel += gaussian3(rng, kStreamRobotImu, index, 3, scenario.rig.noise.sd_accel_B);
  return s;
}

ImuSample ground_imu_sample(const Scenario& scenario, std::size_t index) {
  const double t = static_cast<double>(index) / scenario.rig.ground_rate;
  ImuSample s = ideal_imu(ground_motion(t, scenario.ground), scenario.ground.gravity, t,
                          Frame::GroundD);
  const CounterRng rng(scenario.rig.seed);
  s.omega += gaussian3(rng, kStreamGroundImu, index, 0, scenario.rig.noise.sd_omega_D);
  s.accel += gaussian3(rng, kStreamGroundImu, index, 3, scenario.rig.noise.sd_accel_D);
  return s;
}

JointState encoder_sample(const Scenario& scenario, std::size_t index) {
  const double t = static_cast<double>(index) / scenario.rig.encoder_rate;
  const RelativeKinematics rel = relative_motion(t, scenario);
  JointState j;
  j.t = t;
  j.q = rel.q;
  j.qdot = rel.qdot;
  const CounterRng rng(scenario.rig.seed);
  const auto n = static_cast<std::uint64_t>(j.q.size());
  for (Eigen::Index i = 0; i < j.q.size(); ++i) {
    const auto lane = static_cast<std::uint64_t>(i);
    if (scenario.rig.sd_q > 0.0) {
      j.q[i] += scenario.rig.sd_q * rng.normal(kStreamEncoders, index, lane);
    }
    if (scenario.rig.sd_qdot > 0.0) {
      j.qdot[i] += scenario.rig.sd_qdot * rng.normal(kStreamEncoders, index, n + lane);
    }
  }
  return j;
}

SimulationLogs synthesize_sensors(const Scenario& scenario) {
  scenario.validate();
  SimulationLogs logs;
  const std::size_t n_robot = sample_count(scenario.rig.robot_rate, scenario.duration);
  const std::size_t n_ground = sample_count(scenario.rig.ground_rate, scenario.duration);
  const std::size_t n_enc = sample_count(scenario.rig.encoder_rate, scenario.duration);
  logs.sensors.robot_imu.reserve(n_robot);
  logs.truth.reserve(n_robot);
  for (std::size_t i = 0; i < n_robot; ++i) {
    logs.sensors.robot_imu.push_back(robot_imu_sample(scenario, i));
    logs.truth.push_back(ground_truth(static_cast<double>(i) / scenario.rig.robot_rate, scenario));
  }
  logs.sensors.ground_imu.reserve(n_ground);
  for (std::size_t i = 0; i < n_ground; ++i) {
    logs.sensors.ground_imu.push_back(ground_imu_sample(scenario, i));
  }
  logs.sensors.encoders.reserve(n_enc);
  for (std::size_t i = 0; i < n_enc; ++i) logs.sensors.encoders.push_back(encoder_sample(scenario, i));
  return logs;
}

KinematicChain biped_leg_chain() {
  KinematicChain chain;
  chain.joints = {
      {Vec3::UnitX(), Vec3(0.0, -0.1, -0.1)},   // hip roll
      {Vec3::UnitZ(), Vec3(0.0, 0.0, -0.05)},   // hip yaw
      {Vec3::UnitY(), Vec3(0.0, 0.0, -0.05)},   // hip pitch
      {Vec3::UnitY(), Vec3(0.0, 0.0, -0.4)},    // knee
      {Vec3::UnitY(), Vec3(0.0, 0.0, -0.4)},    // ankle pitch
      {Vec3::UnitX(), Vec3(0.0, 0.0, -0.02)},   // ankle roll
  };
  chain.foot_offset = Vec3(0.05, 0.0, -0.05);
  return chain;
}

Scenario treadmill_scenario(std::uint64_t seed) {
  Scenario s;
  s.chain = biped_leg_chain();
  s.pose.q = VecX::Zero(6);
  s.pose.q << 0.0, 0.0, -0.35, 0.7, -0.35, 0.0;
  s.pose.R = exp_so3(Vec3(0.0, 0.0, 0.3));
  s.pose.p = Vec3(0.6, 0.4, 1.2);
  s.rig.seed = seed;
  return s;
}

void InitialErrorRanges::validate() const {
  for (const Interval* i : {&rot, &vel, &pos}) {
    if (!(i->lo <= i->hi)) throw std::invalid_argument("initial-error range has lo > hi");
  }
}

InitialError sample_initial_error(std::uint64_t seed, std::uint64_t trial,
                                  const InitialErrorRanges& ranges) {
  ranges.validate();
  const CounterRng rng(seed);
  InitialError e;
  for (int i = 0; i < 3; ++i) {
    const auto lane = static_cast<std::uint64_t>(i);
    e.rpy[i] = rng.uniform(ranges.rot.lo, ranges.rot.hi, kStreamInitialError, trial, lane);
    e.dv[i] = rng.uniform(ranges.vel.lo, ranges.vel.hi, kStreamInitialError, trial, 3 + lane);
    e.dp[i] = rng.uniform(ranges.pos.lo, ranges.pos.hi, kStreamInitialError, trial, 6 + lane);
  }
  return e;
}

Mat3 rotation_from_rpy(const Vec3& rpy) {
  return exp_so3(Vec3::UnitZ() * rpy.z()) * exp_so3(Vec3::UnitY() * rpy.y()) *
         exp_so3(Vec3::UnitX() * rpy.x());
}

SE23 apply_initial_error(const SE23& truth, const InitialError& error) {
  SE23 x = truth;
  x.R = rotation_from_rpy(error.rpy) * truth.R;
  x.v = truth.v + error.dv;
  x.p = truth.p + error.dp;
  return x;
}

}  // namespace niekf
