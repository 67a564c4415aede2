#include "niekf/baseline.hpp"

#include <stdexcept>

#include <Eigen/LU>
#include <Eigen/Eigenvalues>

namespace niekf {

namespace {

Mat12 symmetrized(const Mat12& p) { return 0.5 * (p + p.transpose()); }

ImuSample world_frame_sample(const Vec3& gravity) {
  ImuSample w;
  w.frame = Frame::GroundD;
  w.accel = -gravity;
  return w;
}

}  // namespace

Mat12 srs_adjoint(const SrsState& state) {
  const Mat3& r = state.X.R;
  Mat12 ad = Mat12::Zero();
  ad.block<3, 3>(0, 0) = r;
  ad.block<3, 3>(3, 0) = hat3(state.X.v) * r;
  ad.block<3, 3>(6, 0) = hat3(state.X.p) * r;
  ad.block<3, 3>(9, 0) = hat3(state.d) * r;
  ad.block<3, 3>(3, 3) = r;
  ad.block<3, 3>(6, 6) = r;
  ad.block<3, 3>(9, 9) = r;
  return ad;
}

SrsState srs_propagate(const SrsState& state, const ImuSample& u_b, double dt,
                       const SrsNoise& noise, const Vec3& gravity) {
  if (!(dt > 0.0)) throw std::invalid_argument("srs_propagate: dt must be positive");
  // A static world is a ground frame that measures only -g.
  SrsState out = state;
  ImuSample robot = u_b;
  robot.frame = Frame::RobotB;
  out.X = propagate_mean(state.X, robot, world_frame_sample(gravity), dt);

  const Mat3 gx = hat3(gravity);
  Mat12 phi = Mat12::Identity();
  phi.block<3, 3>(3, 0) = gx * dt;
  phi.block<3, 3>(6, 0) = 0.5 * gx * dt * dt;
  phi.block<3, 3>(6, 3) = Mat3::Identity() * dt;

  Mat12 cov = Mat12::Zero();
  cov.block<3, 3>(0, 0).diagonal().setConstant(noise.sd_omega * noise.sd_omega);
  cov.block<3, 3>(3, 3).diagonal().setConstant(noise.sd_accel * noise.sd_accel);
  cov.block<3, 3>(9, 9).diagonal().setConstant(noise.sd_contact * noise.sd_contact);
  const Mat12 ad = srs_adjoint(state);
  const Mat12 q = ad * cov * ad.transpose();
  out.P = symmetrized(phi * state.P * phi.transpose() + phi * q * phi.transpose() * dt);
  out.t = state.t + dt;
  return out;
}

namespace {

Mat3 kinematic_cov(const SrsState& state, const JointState& joint, const KinematicChain& chain,
                   const SrsNoise& noise) {
  const Mat3X jac = leg_jacobian(chain, joint.q);
  const Mat3 body = noise.sd_encoder * noise.sd_encoder * jac * jac.transpose();
  return state.X.R * body * state.X.R.transpose();
}

}  // namespace

SrsUpdateResult srs_update(const SrsState& state, const JointState& joint,
                           const KinematicChain& chain, const SrsNoise& noise,
                           double max_condition) {
  SrsUpdateResult result;
  result.state = state;
  const Vec3 s = forward_kinematics(chain, joint.q);
  // X y - b with y = (s, 0, 1, -1) and b = (0, 0, 1, -1).
  const Vec3 r = state.X.R * s + state.X.p - state.d;
  result.innovation = r;

  Eigen::Matrix<double, 3, 12> h = Eigen::Matrix<double, 3, 12>::Zero();
  h.block<3, 3>(0, 6) = -Mat3::Identity();
  h.block<3, 3>(0, 9) = Mat3::Identity();
  const Mat3 n = kinematic_cov(state, joint, chain, noise);
  Mat3 sm = h * state.P * h.transpose() + n;
  sm = 0.5 * (sm + sm.transpose());
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(sm, Eigen::EigenvaluesOnly);
  const Vec3 ev = eig.eigenvalues();
  if (!(ev(0) > 0.0) || ev(2) / ev(0) > max_condition) return result;

  const Eigen::Matrix<double, 12, 3> k = state.P * h.transpose() * sm.inverse();
  const Tangent12 dx = k * r;
  const Tangent9 dx9 = make_tangent(dx.segment<3>(0), dx.segment<3>(3), dx.segment<3>(6));
  const SE23 delta = exp_se23(dx9);
  result.state.X = delta * state.X;
  result.state.d = delta.R * state.d + gamma(1, dx.segment<3>(0)) * dx.segment<3>(9);
  const Mat12 ikh = Mat12::Identity() - k * h;
  result.state.P = symmetrized(ikh * state.P * ikh.transpose() + k * n * k.transpose());
  result.applied = true;
  return result;
}

SrsState srs_initialize(const SE23& x, const Mat9& P, double t, const JointState& joint,
                        const KinematicChain& chain, const SrsNoise& noise) {
  SrsState state;
  state.X = x;
  state.t = t;
  state.d = x.p + x.R * forward_kinematics(chain, joint.q);
  // To first order the contact error equals the position error.
  Eigen::Matrix<double, 12, 9> f = Eigen::Matrix<double, 12, 9>::Zero();
  f.topRows<9>().setIdentity();
  f.block<3, 3>(9, 6) = Mat3::Identity();
  state.P = f * P * f.transpose();
  state.P.block<3, 3>(9, 9) += kinematic_cov(state, joint, chain, noise);
  return state;
}

RunResult srs_run(const SensorLog& log, const SrsConfig& config, const KinematicChain& chain) {
  log.validate();
  chain.validate();
  if (log.encoders.empty()) throw std::runtime_error("encoder stream is empty");
  if ((config.initial_cov_diag.array() <= 0.0).any()) {
    throw std::invalid_argument("initial covariance diagonal must be positive");
  }

  RunResult out;
  const Mat9 p0 = config.initial_cov_diag.asDiagonal();
  HoldCursor<JointState> encoders(log.encoders);
  const double t0 = log.robot_imu.front().t;
  SrsState state = srs_initialize(config.initial_state, p0, t0, encoders.at(t0), chain, config.noise);
  out.trace.reserve(log.robot_imu.size());

  for (std::size_t k = 0; k < log.robot_imu.size(); ++k) {
    const ImuSample& robot = log.robot_imu[k];
    if (k > 0) {
      const ImuSample& prev = log.robot_imu[k - 1];
      const double dt = robot.t - prev.t;
      if (dt > 0.0) {
        state = srs_propagate(state, prev, dt, config.noise, config.gravity);
        state.X.reorthonormalize(config.reorthonormalize_threshold);
        state.t = robot.t;
      }
    }
    double innovation_norm = 0.0;
    if (encoders.take_fresh(robot.t)) {
      const SrsUpdateResult up = srs_update(state, log.encoders[encoders.index()], chain,
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
    rec.P_diag = state.P.diagonal().head<9>();
    rec.innovation_norm = innovation_norm;
    out.trace.push_back(rec);
  }
  out.final_state.X = state.X;
  out.final_state.P = state.P.topLeftCorner<9, 9>();
  out.final_state.t = state.t;
  return out;
}

}  // namespace niekf
