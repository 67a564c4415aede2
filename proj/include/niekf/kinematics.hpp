#pragma once

#include <vector>

#include <Eigen/Core>

#include "niekf/liegroup.hpp"

namespace niekf {

using VecX = Eigen::VectorXd;
using Mat3X = Eigen::Matrix<double, 3, Eigen::Dynamic>;

/// Revolute joint. `offset` is the joint origin in the parent link frame
/// (the base frame for the first joint); `axis` is expressed in the joint's
/// own link frame.
struct Joint {
  Vec3 axis = Vec3::UnitZ();
  Vec3 offset = Vec3::Zero();
};

/// Serial revolute leg from the base frame {B} to the stance foot.
struct KinematicChain {
  std::vector<Joint> joints;
  /// Foot point in the last link frame.
  Vec3 foot_offset = Vec3::Zero();

  std::size_t size() const { return joints.size(); }
  /// Throws std::invalid_argument if there are no joints or an axis is not
  /// unit length.
  void validate() const;
};

/// Joint encoder sample: angles, rates and time stamp.
struct JointState {
  double t = 0.0;
  VecX q;
  VecX qdot;
};

/// Foot position relative to the base, expressed in {B}.
Vec3 forward_kinematics(const KinematicChain& chain, const VecX& q);

/// d forward_kinematics / dq, 3 x N.
Mat3X leg_jacobian(const KinematicChain& chain, const VecX& q);

/// Fill `qdot` with backward differences of `q` where the encoder log has
/// no rate channel. The first sample copies the second sample's rate.
void backward_difference_rates(std::vector<JointState>& samples);

}  // namespace niekf
