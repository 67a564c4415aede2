#include "niekf/filter.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/LU>
#include <Eigen/Eigenvalues>

namespace niekf {

namespace {

void require_finite(const ImuSample& s, const char* what) {
  if (!s.omega.allFinite() || !s.accel.allFinite() || !std::isfinite(s.t)) {
    throw std::runtime_error(std::string("non-finite ") + what + " sample at t=" +
                             std::to_string(s.t));
  }
}

Mat9 symmetrized(const Mat9& p) { return 0.5 * (p + p.transpose()); }

}  // namespace

void SensorLog::validate() const {
  if (robot_imu.empty()) throw std::runtime_error("robot IMU stream is empty");
  auto check = [](const auto& stream, const char* name) {
    for (std::size_t i = 1; i < stream.size(); ++i) {
      if (stream[i].t < stream[i - 1].t) {
        throw std::runtime_error(std::string(name) + " timestamps regress at index " +
                                 std::to_string(i));
      }
    }
  };
  check(robot_imu, "robot IMU");
  check(ground_imu, "ground IMU");
  check(encoders, "encoder");
}

void FilterConfig::validate() const {
  noise.validate();
  if ((initial_cov_diag.array() <= 0.0).any()) {
    throw std::invalid_argument("initial covariance diagonal must be positive");
  }
}

Mat5 zmatrix(const ImuSample& sample, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("zmatrix: dt must be positive");
  const Vec3 phi = sample.omega * dt;
  Mat5 z = Mat5::Identity();
  z.topLeftCorner<3, 3>() = gamma(0, phi);
  z.block<3, 1>(0, 3) = gamma(1, phi) * sample.accel * dt;
  z.block<3, 1>(0, 4) = gamma(2, phi) * sample.accel * (dt * dt);
  z(3, 4) = dt;
  return z;
}

Mat5 zmatrix_inverse(const ImuSample& sample, double dt) {
  const Mat5 z = zmatrix(sample, dt);
  const Mat3 rt = z.topLeftCorner<3, 3>().transpose();
  const Vec3 b = z.block<3, 1>(0, 3);
  const Vec3 c = z.block<3, 1>(0, 4);
  Mat5 inv = Mat5::Identity();
  inv.topLeftCorner<3, 3>() = rt;
  inv.block<3, 1>(0, 3) = -rt * b;
  inv.block<3, 1>(0, 4) = -rt * (c - b * dt);
  inv(3, 4) = -dt;
  return inv;
}

SE23 propagate_mean(const SE23& x, const ImuSample& u_b, const ImuSample& u_d, double dt) {
  if (u_b.frame != Frame::RobotB || u_d.frame != Frame::GroundD) {
    throw std::invalid_argument("propagate: expects a robot sample and a ground sample");
  }
  return SE23::from_matrix(zmatrix_inverse(u_d, dt) * x.matrix() * zmatrix(u_b, dt));
}

FilterState propagate(const FilterState& state, const ImuSample& u_b, const ImuSample& u_d,
                      double dt, double reorthonormalize_threshold) {
  if (!(dt > 0.0)) throw std::invalid_argument("propagate: dt must be positive");
  require_finite(u_b, "robot IMU");
  require_finite(u_d, "ground IMU");
  FilterState out = state;
  out.X = propagate_mean(state.X, u_b, u_d, dt);
  out.X.reorthonormalize(reorthonormalize_threshold);
  const Mat9 phi = phi_blocks(u_d.omega, u_d.accel, dt);
  const Mat9 q = qbar(state.X, state.noise);
  out.P = symmetrized(phi * state.P * phi.transpose() + phi * q * phi.transpose() * dt);
  if (!out.P.allFinite() || !out.X.matrix().allFinite()) {
    throw std::runtime_error("propagate: state became non-finite at t=" + std::to_string(out.t));
  }
  out.t = state.t + dt;
  return out;
}

UpdateResult update(const FilterState& state, const JointState& joint, const Vec3& omega_b,
                    const Vec3& omega_d, const KinematicChain& chain, const NoiseParams& noise,
                    double max_condition) {
  UpdateResult result;
  result.state = state;
  const Vec3 r = measurement_y(omega_b, joint, chain) - measurement_h(state.X, omega_d, joint, chain);
  const Mat3x9 h = jacobian_H(state.X, omega_d, joint, chain);
  const Mat3 n = state.X.R * (noise.sd_contact_vel * noise.sd_contact_vel * Mat3::Identity()) *
                 state.X.R.transpose();
  Mat3 s = h * state.P * h.transpose() + n;
  s = 0.5 * (s + s.transpose());
  result.innovation = r;
  result.H = h;

  const Eigen::SelfAdjointEigenSolver<Mat3> eig(s, Eigen::EigenvaluesOnly);
  const Vec3 ev = eig.eigenvalues();
  if (!(ev(0) > 0.0) || ev(2) / ev(0) > max_condition) return result;

  const Eigen::Matrix<double, 9, 3> k = state.P * h.transpose() * s.inverse();
  result.K = k;
  result.state.X = exp_se23(k * r) * state.X;
  const Mat9 ikh = Mat9::Identity() - k * h;
  result.state.P = symmetrized(ikh * state.P * ikh.transpose() + k * n * k.transpose());
  result.applied = true;
  return result;
}

RunResult run(const SensorLog& log, const FilterConfig& config, const KinematicChain& chain) {
  log.validate();
  config.validate();
  chain.validate();
  if (log.ground_imu.empty()) throw std::runtime_error("ground IMU stream is empty");

  RunResult out;
  FilterState state;
  state.X = config.initial_state;
  state.P = config.initial_cov_diag.asDiagonal();
  state.t = log.robot_imu.front().t;
  state.noise = config.noise;

  HoldCursor<ImuSample> ground(log.ground_imu);
  HoldCursor<JointState> encoders(log.encoders);
  out.trace.reserve(log.robot_imu.size());

  for (std::size_t k = 0; k < log.robot_imu.size(); ++k) {
    const ImuSample& robot = log.robot_imu[k];
    if (k > 0) {
      const ImuSample& prev = log.robot_imu[k - 1];
      const double dt = robot.t - prev.t;
      if (dt > 0.0) {
        state = propagate(state, prev, ground.at(prev.t), dt, config.reorthonormalize_threshold);
        state.t = robot.t;
      }
    }
    double innovation_norm = 0.0;
    if (!encoders.empty() && encoders.take_fresh(robot.t)) {
      const JointState& joint = log.encoders[encoders.index()];
      const UpdateResult up = update(state, joint, robot.omega, ground.at(robot.t).omega, chain,
                                     config.noise, config.max_condition);
      if (up.applied) {
        state = up.state;
        state.X.reorthonormalize(config.reorthonormalize_threshold);
      } else {
        ++out.skipped_updates;
      }
      innovation_norm = up.innovation.norm();
    }
    TraceRecord rec;
    rec.t = robot.t;
    rec.X = state.X;
    rec.P_diag = state.P.diagonal();
    rec.innovation_norm = innovation_norm;
    out.trace.push_back(rec);
  }
  out.final_state = state;
  return out;
}

}  // namespace niekf
