#include <doctest.h>

#include <stdexcept>

#include "harness.hpp"
#include "niekf/observability.hpp"
#include "oracles.hpp"

using namespace niekf;

namespace {

Tangent9 unit(int i) {
  Tangent9 e = Tangent9::Zero();
  e(i) = 1.0;
  return e;
}

// Two steps at constant ground input, for checking the stacked blocks.
struct TwoSteps {
  std::vector<FilterState> states;
  std::vector<ImuSample> inputs;
  std::vector<JointState> joints;
  KinematicChain chain;
  double dt = 0.002;
};

TwoSteps two_steps(std::uint64_t seed) {
  oracle::Draws r(seed);
  TwoSteps out;
  out.chain = r.chain(4);
  ImuSample d;
  d.frame = Frame::GroundD;
  d.omega = r.vec3();
  d.accel = r.vec3(10.0);
  for (int j = 0; j < 2; ++j) {
    FilterState s;
    s.X = r.element();
    s.t = j * out.dt;
    out.states.push_back(s);
    out.inputs.push_back(d);
    JointState q;
    q.q = r.angles(4);
    q.qdot = r.angles(4);
    out.joints.push_back(q);
  }
  return out;
}

}  // namespace

TEST_SUITE("observability") {
  TEST_CASE("rank of the identity") {
    const RankResult rr = rank_and_nullspace(MatX::Identity(9, 9), 1e-9);
    CHECK(rr.rank == 9);
    CHECK(rr.null_space.cols() == 0);
  }

  TEST_CASE("a zeroed column block loses rank") {
    MatX m = MatX::Random(30, 9);
    m.middleCols(3, 3).setZero();
    const RankResult rr = rank_and_nullspace(m, 1e-9);
    CHECK(rr.rank <= 6);
    REQUIRE(rr.null_space.cols() == 3);
    CHECK((m * rr.null_space).norm() < 1e-10);
  }

  TEST_CASE("constructed rank is recovered") {
    for (int rank = 1; rank <= 9; ++rank) {
      const MatX m = MatX::Random(27, rank) * MatX::Random(rank, 9);
      const RankResult rr = rank_and_nullspace(m, 1e-9);
      CHECK(rr.rank == rank);
      CHECK(rr.null_space.cols() == 9 - rank);
      if (rr.null_space.cols() > 0) {
        CHECK((rr.null_space.transpose() * rr.null_space - MatX::Identity(9 - rank, 9 - rank))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
        CHECK((m * rr.null_space).norm() < 1e-9 * m.norm());
      }
    }
  }

  TEST_CASE("invalid rank queries") {
    CHECK_THROWS_AS(rank_and_nullspace(MatX(), 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(rank_and_nullspace(MatX::Identity(3, 3), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(rank_and_nullspace(MatX::Identity(3, 3), -1.0), std::invalid_argument);
  }

  TEST_CASE("a single step sees at most three directions") {
    const ObservabilityReport rep = scenario_observability(treadmill_scenario(), 0.3, 1);
    CHECK(rep.rank <= 3);
    CHECK(rep.classification == ObservabilityClass::Other);
  }

  TEST_CASE("stationary ground hides yaw and position") {
    Scenario s = treadmill_scenario();
    s.ground = GroundMotionParams::stationary();
    const ObservabilityReport rep = scenario_observability(s, 0.0, 10);
    CHECK(rep.rank == 5);
    CHECK(rep.classification == ObservabilityClass::YawAndPositionUnobservable);
    CHECK(std::string(to_string(rep.classification)) == "YawAndPositionUnobservable");
    REQUIRE(rep.null_space.size() == 4);
    for (const Tangent9& n : rep.null_space) {
      CHECK((rep.O * n).norm() < 1e-8 * rep.singular_values(0));
      CHECK(n.segment<3>(3).norm() < 1e-8);
    }
  }

  TEST_CASE("moving ground: only the position along the pitch axis is hidden") {
    const Scenario s = treadmill_scenario();
    const ObservabilityReport rep = scenario_observability(s, 0.3, 10);
    CHECK(rep.rank == 8);
    REQUIRE(rep.null_space.size() == 1);
    const Tangent9 expected = make_tangent(Vec3::Zero(), Vec3::Zero(), s.ground.pitch_axis);
    CHECK(std::abs(rep.null_space.front().dot(expected)) > 1.0 - 1e-8);
    CHECK((rep.O * expected).norm() < 1e-9 * rep.singular_values(0));
    CHECK(rep.classification == ObservabilityClass::Other);
  }

  TEST_CASE("translating along the pitch axis leaves every prediction unchanged") {
    const Scenario s = treadmill_scenario();
    const Tangent9 xi = make_tangent(Vec3::Zero(), Vec3::Zero(), 0.7 * s.ground.pitch_axis);
    for (double t : {0.0, 0.4, 1.3, 2.9}) {
      const GroundTruthRecord rec = ground_truth(t, s);
      const ImuSample d = ideal_imu(rec.ground, s.ground.gravity, t, Frame::GroundD);
      const RelativeKinematics rel = relative_motion(t, s);
      JointState j;
      j.q = rel.q;
      j.qdot = rel.qdot;
      const Vec3 h0 = measurement_h(rec.relative, d.omega, j, s.chain);
      const Vec3 h1 = measurement_h(exp_se23(xi) * rec.relative, d.omega, j, s.chain);
      CHECK((h0 - h1).norm() < 1e-12);
    }
  }

  TEST_CASE("first row block is the measurement Jacobian") {
    const TwoSteps ts = two_steps(63);
    const ObservabilityReport rep =
        build_observability(ts.states, ts.inputs, ts.joints, ts.chain, 2);
    const Mat3& r0 = ts.states[0].X.R;
    const Vec3 w = ts.inputs[0].omega;
    const Mat3 c0 = contact_rotation_block(ts.states[0].X, w, forward_kinematics(ts.chain, ts.joints[0].q));
    CHECK((rep.O.block(0, 0, 3, 3) - c0).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((rep.O.block(0, 3, 3, 3) + r0.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((rep.O.block(0, 6, 3, 3) - r0.transpose() * hat3(w)).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("second row block in expanded form") {
    const TwoSteps ts = two_steps(64);
    const ObservabilityReport rep =
        build_observability(ts.states, ts.inputs, ts.joints, ts.chain, 2);
    const Mat9 phi = phi_blocks(ts.inputs[0].omega, ts.inputs[0].accel, ts.dt);
    auto blk = [&](int i, int j) -> Mat3 { return phi.block<3, 3>(3 * i, 3 * j); };
    const Mat3 r1t = ts.states[1].X.R.transpose();
    const Mat3 w = hat3(ts.inputs[0].omega);
    const Mat3 c1 = contact_rotation_block(ts.states[1].X, ts.inputs[1].omega,
                                           forward_kinematics(ts.chain, ts.joints[1].q));
    const Mat3 o21 = c1 * blk(0, 0) - r1t * blk(1, 0) + r1t * w * blk(2, 0);
    const Mat3 o22 = -r1t * blk(1, 1) + r1t * w * blk(2, 1);
    const Mat3 o23 = r1t * w * blk(2, 2);
    CHECK((rep.O.block(3, 0, 3, 3) - o21).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((rep.O.block(3, 3, 3, 3) - o22).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((rep.O.block(3, 6, 3, 3) - o23).cwiseAbs().maxCoeff() < 1e-10);
    // The rotation row of Phi does not see velocity or position.
    CHECK(blk(0, 1).isZero(0.0));
    CHECK(blk(0, 2).isZero(0.0));
  }

  TEST_CASE("short input lists are rejected") {
    TwoSteps ts = two_steps(65);
    CHECK_THROWS_AS(build_observability(ts.states, ts.inputs, ts.joints, ts.chain, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_observability(ts.states, ts.inputs, ts.joints, ts.chain, 0),
                    std::invalid_argument);
  }

  TEST_CASE("classification of hand-made null spaces") {
    const Vec3 g(0, 0, 9.81);
    std::vector<Tangent9> ns{unit(6), unit(7), unit(8), unit(2)};
    CHECK(classify(5, ns, g) == ObservabilityClass::YawAndPositionUnobservable);
    ns[3] = unit(0);
    CHECK(classify(5, ns, g) == ObservabilityClass::Other);
    CHECK(classify(9, {}, g) == ObservabilityClass::FullyObservable);
    CHECK(classify(8, {unit(7)}, g) == ObservabilityClass::Other);
  }
}
