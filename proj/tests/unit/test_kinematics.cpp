#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "niekf/kinematics.hpp"
#include "oracles.hpp"

using namespace niekf;

namespace {

KinematicChain straight_z() {
  KinematicChain c;
  c.joints = {{Vec3::UnitZ(), Vec3(0, 0, -0.5)}};
  c.foot_offset = Vec3(0, 0, -0.5);
  return c;
}

KinematicChain planar_y() {
  KinematicChain c;
  c.joints = {{Vec3::UnitY(), Vec3::Zero()}, {Vec3::UnitY(), Vec3(0, 0, -0.5)}};
  c.foot_offset = Vec3(0, 0, -0.5);
  return c;
}

Mat3X central_differences(const KinematicChain& c, const VecX& q, double h) {
  Mat3X j(3, q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    VecX qp = q, qm = q;
    qp[i] += h;
    qm[i] -= h;
    j.col(i) = (forward_kinematics(c, qp) - forward_kinematics(c, qm)) / (2 * h);
  }
  return j;
}

}  // namespace

TEST_SUITE("kinematics") {
  TEST_CASE("straight chain") {
    const KinematicChain c = straight_z();
    CHECK(forward_kinematics(c, VecX::Zero(1)).isApprox(Vec3(0, 0, -1), 1e-15));
    CHECK((forward_kinematics(c, VecX::Constant(1, std::numbers::pi)) - Vec3(0, 0, -1)).norm() < 1e-15);
    CHECK(leg_jacobian(c, VecX::Zero(1)).norm() < 1e-15);
  }

  TEST_CASE("planar chain folded a quarter turn") {
    const KinematicChain c = planar_y();
    VecX q(2);
    q << std::numbers::pi / 2, 0.0;
    // Rotating (0,0,-1) by +90 degrees about y gives (-1,0,0).
    const Vec3 expected = oracle::axis_angle(Vec3::UnitY(), std::numbers::pi / 2) * Vec3(0, 0, -1);
    CHECK((forward_kinematics(c, q) - expected).norm() < 1e-15);
    CHECK((forward_kinematics(c, q) - Vec3(-1, 0, 0)).norm() < 1e-15);
  }

  TEST_CASE("planar chain Jacobian at rest") {
    const KinematicChain c = planar_y();
    const VecX q = VecX::Zero(2);
    const Mat3X j = leg_jacobian(c, q);
    CHECK((j - central_differences(c, q, 1e-6)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(j.col(0).isApprox(Vec3(-1, 0, 0), 1e-12));
    CHECK(j.col(1).isApprox(Vec3(-0.5, 0, 0), 1e-12));
  }

  TEST_CASE("Jacobian matches central differences on random chains") {
    oracle::Draws d(21);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const int n = 1 + i % 7;
      const KinematicChain c = d.chain(n);
      const VecX q = d.angles(n);
      worst = std::max(worst, (leg_jacobian(c, q) - central_differences(c, q, 1e-6)).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-6);
  }

  TEST_CASE("first-order consistency of forward kinematics") {
    oracle::Draws d(22);
    const KinematicChain c = d.chain(6);
    const VecX q = d.angles(6);
    VecX dir = d.angles(6);
    dir.normalize();
    const double h = 1e-6;
    const Vec3 slope = (forward_kinematics(c, q + h * dir) - forward_kinematics(c, q)) / h;
    CHECK((slope - leg_jacobian(c, q) * dir).norm() < 1e-5);
  }

  TEST_CASE("angles are periodic") {
    oracle::Draws d(23);
    const KinematicChain c = d.chain(5);
    const VecX q = d.angles(5);
    const VecX wrapped = q + VecX::Constant(5, 2 * std::numbers::pi);
    CHECK((forward_kinematics(c, q) - forward_kinematics(c, wrapped)).norm() < 1e-12);
  }

  TEST_CASE("length mismatch and invalid chains") {
    const KinematicChain c = planar_y();
    CHECK_THROWS_AS(forward_kinematics(c, VecX::Zero(3)), std::invalid_argument);
    CHECK_THROWS_AS(leg_jacobian(c, VecX::Zero(1)), std::invalid_argument);
    KinematicChain bad = c;
    bad.joints[0].axis = Vec3(1, 1, 0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(KinematicChain{}.validate(), std::invalid_argument);
  }

  TEST_CASE("backward difference rates") {
    std::vector<JointState> s(3);
    for (int i = 0; i < 3; ++i) {
      s[static_cast<std::size_t>(i)].t = 0.01 * i;
      s[static_cast<std::size_t>(i)].q = VecX::Constant(2, 0.5 * i * i);
    }
    backward_difference_rates(s);
    CHECK(s[1].qdot[0] == doctest::Approx(50.0));
    CHECK(s[2].qdot[1] == doctest::Approx(150.0));
    CHECK(s[0].qdot[0] == doctest::Approx(50.0));
  }
}
