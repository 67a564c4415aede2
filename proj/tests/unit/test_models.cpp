#include <doctest.h>

#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "niekf/models.hpp"
#include "oracles.hpp"

using namespace niekf;

namespace {

ImuSample sample(const Vec3& w, const Vec3& a, Frame f) {
  ImuSample s;
  s.omega = w;
  s.accel = a;
  s.frame = f;
  return s;
}

KinematicChain one_joint_z(const Vec3& foot) {
  KinematicChain c;
  c.joints = {{Vec3::UnitZ(), Vec3::Zero()}};
  c.foot_offset = foot;
  return c;
}

JointState joint(const VecX& q, const VecX& qd) {
  JointState j;
  j.q = q;
  j.qdot = qd;
  return j;
}

}  // namespace

TEST_SUITE("models") {
  TEST_CASE("U matrix layout") {
    Mat5 expected = Mat5::Zero();
    expected(3, 4) = 1.0;
    CHECK(build_U(sample(Vec3::Zero(), Vec3::Zero(), Frame::RobotB)) == expected);

    const Vec3 w(0, 0, 1), a(0, 0, -9.81);
    const Mat5 u = build_U(sample(w, a, Frame::GroundD));
    CHECK(u.topLeftCorner<3, 3>() == hat3(w));
    CHECK(u.block<3, 1>(0, 3) == a);
    CHECK(u.block<3, 1>(0, 4).isZero(0.0));
    CHECK(u.row(4).isZero(0.0));
    CHECK(u.row(3) == expected.row(3));
    const Mat5 alg = oracle::algebra_matrix(make_tangent(w, a, Vec3::Zero()));
    CHECK(u.topLeftCorner<4, 4>() == alg.topLeftCorner<4, 4>());
  }

  TEST_CASE("identical readings cancel at the identity") {
    const ImuSample b = sample(Vec3(0.1, 0.2, 0.3), Vec3(1, 2, 3), Frame::RobotB);
    ImuSample d = b;
    d.frame = Frame::GroundD;
    CHECK(process_f(Mat5::Identity(), b, d).isZero(0.0));
    CHECK_THROWS_AS(process_f(Mat5::Identity(), d, b), std::invalid_argument);
  }

  TEST_CASE("process model is group affine") {
    oracle::Draws r(31);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const Mat5 x1 = r.element().matrix(), x2 = r.element().matrix();
      const ImuSample b = sample(r.vec3(), r.vec3(5.0), Frame::RobotB);
      const ImuSample d = sample(r.vec3(), r.vec3(5.0), Frame::GroundD);
      const Mat5 lhs = process_f(x1 * x2, b, d);
      const Mat5 rhs = process_f(x1, b, d) * x2 + x1 * process_f(x2, b, d) -
                       x1 * process_f(Mat5::Identity(), b, d) * x2;
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-11);
  }

  TEST_CASE("velocity column of the drift") {
    oracle::Draws r(32);
    for (int i = 0; i < 20; ++i) {
      const SE23 x = r.element();
      const ImuSample b = sample(r.vec3(), r.vec3(5.0), Frame::RobotB);
      const ImuSample d = sample(r.vec3(), r.vec3(5.0), Frame::GroundD);
      const Vec3 col = process_f(x.matrix(), b, d).block<3, 1>(0, 3);
      const Vec3 expected = x.R * b.accel - d.accel - oracle::cross(d.omega, x.v);
      CHECK((col - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("observation from robot-side data") {
    const KinematicChain c = one_joint_z(Vec3(0.1, 0, -1));
    CHECK(measurement_y(Vec3::Zero(), joint(VecX::Zero(1), VecX::Zero(1)), c).isZero(0.0));
    CHECK(measurement_y(Vec3(0, 0, 1), joint(VecX::Zero(1), VecX::Zero(1)), c)
              .isApprox(Vec3(0, 0.1, 0), 1e-15));
    CHECK(measurement_y(Vec3::Zero(), joint(VecX::Zero(1), VecX::Ones(1)), c)
              .isApprox(Vec3(0, 0.1, 0), 1e-15));
  }

  TEST_CASE("predicted observation") {
    const KinematicChain c = one_joint_z(Vec3(0.1, 0, -1));
    oracle::Draws r(33);
    SE23 x = r.element();
    x.v.setZero();
    CHECK(measurement_h(x, Vec3::Zero(), joint(VecX::Zero(1), VecX::Zero(1)), c).isZero(0.0));
    CHECK(measurement_h(SE23::identity(), Vec3(0, 0, 1), joint(VecX::Zero(1), VecX::Zero(1)), c)
              .isApprox(Vec3(0, 0.1, 0), 1e-15));
  }

  TEST_CASE("H without ground rotation") {
    oracle::Draws r(34);
    const SE23 x = r.element();
    const KinematicChain c = r.chain(3);
    const Mat3x9 h = jacobian_H(x, Vec3::Zero(), joint(r.angles(3), VecX::Zero(3)), c);
    CHECK(h.leftCols<3>().isZero(0.0));
    CHECK(h.middleCols<3>(3) == -x.R.transpose());
    CHECK(h.rightCols<3>().isZero(0.0));
  }

  TEST_CASE("contact rotation block at the identity") {
    oracle::Draws r(35);
    const Vec3 w = r.vec3(), s = r.vec3();
    const Mat3 expected = hat3(oracle::cross(w, s)) - hat3(w) * hat3(s);
    CHECK((contact_rotation_block(SE23::identity(), w, s) - expected).cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("H matches directional finite differences") {
    // Right error eta = Xbar X^-1 = exp(xi), i.e. X = exp(-xi) Xbar, and
    // h(Xbar) - h(X) ~ H xi.
    oracle::Draws r(36);
    int failures = 0;
    for (int i = 0; i < 50; ++i) {
      const SE23 xbar = r.element();
      const KinematicChain c = r.chain(4);
      const JointState j = joint(r.angles(4), r.angles(4));
      const Vec3 w = r.vec3();
      const Tangent9 dir = r.tangent().normalized();
      const double eps = 1e-6;
      const SE23 x = exp_se23(-eps * dir) * xbar;
      const Vec3 fd = (measurement_h(xbar, w, j, c) - measurement_h(x, w, j, c)) / eps;
      const Vec3 lin = jacobian_H(xbar, w, j, c) * dir;
      if ((fd - lin).norm() > 1e-4 * std::max(1.0, lin.norm())) ++failures;
    }
    CHECK(failures == 0);
  }

  TEST_CASE("A matrix blocks") {
    Mat9 expected = Mat9::Zero();
    expected.block<3, 3>(6, 3) = Mat3::Identity();
    CHECK(matrix_A(Vec3::Zero(), Vec3::Zero()) == expected);
    const Mat9 a = matrix_A(Vec3(0, 0, 1), Vec3::Zero());
    for (int k = 0; k < 3; ++k) CHECK(a.block<3, 3>(3 * k, 3 * k) == -hat3(Vec3(0, 0, 1)));
  }

  TEST_CASE("A is the linearization of the error dynamics") {
    oracle::Draws r(37);
    for (int i = 0; i < 20; ++i) {
      const ImuSample b = sample(r.vec3(), r.vec3(5.0), Frame::RobotB);
      const ImuSample d = sample(r.vec3(), r.vec3(5.0), Frame::GroundD);
      const Tangent9 xi = r.tangent(1e-5 / 3.0);
      const Mat5 eta = Mat5::Identity() + oracle::algebra_matrix(xi);
      const Mat5 g = process_f(eta, b, d) - eta * process_f(Mat5::Identity(), b, d);
      const Tangent9 lin = matrix_A(d.omega, d.accel) * xi;
      CHECK((oracle::algebra_vector(g) - lin).norm() <= 1e-3 * lin.norm());
    }
  }

  TEST_CASE("transition blocks at zero input") {
    const Mat9 phi = phi_blocks(Vec3::Zero(), Vec3::Zero(), 0.002);
    Mat9 expected = Mat9::Identity();
    expected.block<3, 3>(6, 3) = 0.002 * Mat3::Identity();
    CHECK((phi - expected).cwiseAbs().maxCoeff() < 1e-18);
    CHECK_THROWS_AS(phi_blocks(Vec3::Zero(), Vec3::Zero(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(phi_blocks(Vec3::Zero(), Vec3::Zero(), -1.0), std::invalid_argument);
  }

  TEST_CASE("transition matrix matches the exponential series") {
    oracle::Draws r(38);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const Vec3 w = r.vec3(2.0), a = r.vec3(10.0);
      const Eigen::MatrixXd ref = oracle::expm_series(matrix_A(w, a) * 0.002);
      worst = std::max(worst, (phi_blocks(w, a, 0.002) - ref).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-9);
  }

  TEST_CASE("transition matrix composes for held inputs") {
    oracle::Draws r(39);
    const Vec3 w = r.vec3(2.0), a = r.vec3(10.0);
    const Mat9 one = phi_blocks(w, a, 0.01);
    CHECK((phi_blocks(w, a, 0.02) - one * one).cwiseAbs().maxCoeff() < 1e-9);
  }

  TEST_CASE("process noise covariance") {
    NoiseParams ones{1, 1, 1, 1, 1};
    Tangent9 diag;
    diag << 2, 2, 2, 2, 2, 2, 0, 0, 0;
    CHECK(qbar(SE23::identity(), ones) == Mat9(diag.asDiagonal()));

    oracle::Draws r(40);
    CHECK(qbar(r.element(), NoiseParams{0, 0, 0, 0, 0}).isZero(0.0));
    double min_eig = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Mat9 q = qbar(r.element(), NoiseParams{});
      CHECK(q == q.transpose());
      min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Mat9>(q).eigenvalues().minCoeff());
    }
    CHECK(min_eig >= -1e-12);
  }

  TEST_CASE("noise parameters must be non-negative") {
    NoiseParams n;
    n.sd_accel_D = -0.1;
    CHECK_THROWS_AS(n.validate(), std::invalid_argument);
  }
}
