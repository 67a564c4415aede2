#include "niekf/kinematics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace niekf {

namespace {

void check_length(const KinematicChain& chain, const VecX& q) {
  if (static_cast<std::size_t>(q.size()) != chain.size()) {
    throw std::invalid_argument("kinematics: expected " + std::to_string(chain.size()) +
                                " joint angles, got " + std::to_string(q.size()));
  }
}

struct ChainPose {
  std::vector<Vec3> origins;  // joint origins in {B}
  std::vector<Vec3> axes;     // joint axes in {B}
  Vec3 foot;
};

ChainPose compose(const KinematicChain& chain, const VecX& q) {
  ChainPose pose;
  pose.origins.reserve(chain.size());
  pose.axes.reserve(chain.size());
  Mat3 rot = Mat3::Identity();
  Vec3 pos = Vec3::Zero();
  for (std::size_t j = 0; j < chain.size(); ++j) {
    const Joint& joint = chain.joints[j];
    pos += rot * joint.offset;
    rot = rot * exp_so3(joint.axis * q[static_cast<Eigen::Index>(j)]);
    pose.origins.push_back(pos);
    pose.axes.push_back(rot * joint.axis);
  }
  pose.foot = pos + rot * chain.foot_offset;
  return pose;
}

}  // namespace

void KinematicChain::validate() const {
  if (joints.empty()) throw std::invalid_argument("kinematic chain has no joints");
  for (std::size_t j = 0; j < joints.size(); ++j) {
    if (std::abs(joints[j].axis.norm() - 1.0) > 1e-9) {
      throw std::invalid_argument("joint " + std::to_string(j + 1) + " axis is not unit length");
    }
  }
}

Vec3 forward_kinematics(const KinematicChain& chain, const VecX& q) {
  check_length(chain, q);
  return compose(chain, q).foot;
}

Mat3X leg_jacobian(const KinematicChain& chain, const VecX& q) {
  check_length(chain, q);
  const ChainPose pose = compose(chain, q);
  Mat3X jac(3, static_cast<Eigen::Index>(chain.size()));
  for (std::size_t j = 0; j < chain.size(); ++j) {
    jac.col(static_cast<Eigen::Index>(j)) = pose.axes[j].cross(pose.foot - pose.origins[j]);
  }
  return jac;
}

void backward_difference_rates(std::vector<JointState>& samples) {
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double dt = samples[i].t - samples[i - 1].t;
    if (dt <= 0.0) throw std::invalid_argument("encoder timestamps must increase");
    samples[i].qdot = (samples[i].q - samples[i - 1].q) / dt;
  }
  if (samples.size() >= 2) {
    samples[0].qdot = samples[1].qdot;
  } else if (samples.size() == 1) {
    samples[0].qdot = VecX::Zero(samples[0].q.size());
  }
}

}  // namespace niekf
