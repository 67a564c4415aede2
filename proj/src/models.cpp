#include "niekf/models.hpp"

#include <stdexcept>

namespace niekf {

void NoiseParams::validate() const {
  if (sd_omega_B < 0 || sd_accel_B < 0 || sd_omega_D < 0 || sd_accel_D < 0 ||
      sd_contact_vel < 0) {
    throw std::invalid_argument("noise standard deviations must be non-negative");
  }
}

Mat5 build_U(const ImuSample& sample) {
  Mat5 u = Mat5::Zero();
  u.topLeftCorner<3, 3>() = hat3(sample.omega);
  u.block<3, 1>(0, 3) = sample.accel;
  u(3, 4) = 1.0;
  return u;
}

Mat5 process_f(const Mat5& x, const ImuSample& u_b, const ImuSample& u_d) {
  if (u_b.frame != Frame::RobotB || u_d.frame != Frame::GroundD) {
    throw std::invalid_argument("process_f: expects a robot sample and a ground sample");
  }
  return -build_U(u_d) * x + x * build_U(u_b);
}

Vec3 measurement_y(const Vec3& omega_b, const JointState& joint, const KinematicChain& chain) {
  const Vec3 s = forward_kinematics(chain, joint.q);
  return omega_b.cross(s) + leg_jacobian(chain, joint.q) * joint.qdot;
}

Vec3 measurement_h(const SE23& x, const Vec3& omega_d, const JointState& joint,
                   const KinematicChain& chain) {
  const Vec3 s = forward_kinematics(chain, joint.q);
  return x.R.transpose() * (omega_d.cross(x.R * s) - x.v + omega_d.cross(x.p));
}

Mat3 contact_rotation_block(const SE23& x_bar, const Vec3& omega_d, const Vec3& s) {
  const Mat3 w = hat3(omega_d);
  const Mat3 rt = x_bar.R.transpose();
  const Vec3 rs = x_bar.R * s;
  return rt * hat3(w * rs) - rt * w * hat3(rs) + rt * hat3(w * x_bar.p) - rt * w * hat3(x_bar.p);
}

Mat3x9 jacobian_H(const SE23& x_bar, const Vec3& omega_d, const JointState& joint,
                  const KinematicChain& chain) {
  const Vec3 s = forward_kinematics(chain, joint.q);
  Mat3x9 h;
  h.block<3, 3>(0, 0) = contact_rotation_block(x_bar, omega_d, s);
  h.block<3, 3>(0, 3) = -x_bar.R.transpose();
  h.block<3, 3>(0, 6) = x_bar.R.transpose() * hat3(omega_d);
  return h;
}

Mat9 matrix_A(const Vec3& omega_d, const Vec3& accel_d) {
  const Mat3 w = hat3(omega_d);
  Mat9 a = Mat9::Zero();
  a.block<3, 3>(0, 0) = -w;
  a.block<3, 3>(3, 0) = -hat3(accel_d);
  a.block<3, 3>(3, 3) = -w;
  a.block<3, 3>(6, 3) = Mat3::Identity();
  a.block<3, 3>(6, 6) = -w;
  return a;
}

Mat9 phi_blocks(const Vec3& omega_d, const Vec3& accel_d, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("phi_blocks: dt must be positive");
  // With Q = exp(-hat(omega) dt) the lower blocks are conjugations of the
  // constant accel term, which integrate to Gamma_1 and Gamma_1 - Gamma_2.
  const Vec3 phi = -omega_d * dt;
  const Mat3 rot = gamma(0, phi);
  const Mat3 g1 = gamma(1, phi);
  const Mat3 g2 = gamma(2, phi);
  Mat9 out = Mat9::Zero();
  out.block<3, 3>(0, 0) = rot;
  out.block<3, 3>(3, 3) = rot;
  out.block<3, 3>(6, 6) = rot;
  out.block<3, 3>(3, 0) = -hat3(g1 * accel_d * dt) * rot;
  out.block<3, 3>(6, 0) = -hat3((g1 - g2) * accel_d * (dt * dt)) * rot;
  out.block<3, 3>(6, 3) = rot * dt;
  return out;
}

Mat9 imu_noise_cov(double sd_omega, double sd_accel) {
  Mat9 cov = Mat9::Zero();
  cov.block<3, 3>(0, 0).diagonal().setConstant(sd_omega * sd_omega);
  cov.block<3, 3>(3, 3).diagonal().setConstant(sd_accel * sd_accel);
  return cov;
}

Mat9 qbar(const SE23& x_bar, const NoiseParams& noise) {
  const Mat9 ad = adjoint(x_bar);
  Mat9 q = ad * imu_noise_cov(noise.sd_omega_B, noise.sd_accel_B) * ad.transpose() +
           imu_noise_cov(noise.sd_omega_D, noise.sd_accel_D);
  return 0.5 * (q + q.transpose());
}

}  // namespace niekf
