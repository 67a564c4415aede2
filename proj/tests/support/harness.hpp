#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "niekf/experiment.hpp"
#include "niekf/filter.hpp"
#include "niekf/report.hpp"
#include "niekf/sim.hpp"

// Scenario plumbing shared by the unit and acceptance tests.
namespace harness {

using namespace niekf;

inline Scenario noise_free(Scenario s) {
  s.rig.noise = NoiseParams{0, 0, 0, 0, 0};
  s.rig.sd_q = 0.0;
  s.rig.sd_qdot = 0.0;
  return s;
}

/// Ground turning at a constant rate about the vertical with the robot
/// standing on it: every IMU reading is constant, so held inputs are exact.
inline Scenario turntable(Scenario s, double rate = 0.5) {
  s.ground.pitch_axis = Vec3::UnitZ();
  s.ground.pitch_amplitude = 0.0;
  s.ground.sway_amplitude = 0.0;
  s.ground.spin_rate = rate;
  return s;
}

/// Run config whose filters use the scenario's own chain.
inline RunConfig config_for(const Scenario& s) {
  RunConfig c;
  c.scenario = s;
  c.srs.gravity = s.ground.gravity;
  return c;
}

/// Per-component absolute errors: roll, pitch, yaw (rad) of R_bar R^T,
/// then velocity and position.
struct ComponentErrors {
  Vec3 rpy = Vec3::Zero();
  Vec3 dv = Vec3::Zero();
  Vec3 dp = Vec3::Zero();
};

inline ComponentErrors errors(const SE23& est, const SE23& truth) {
  return {attitude_error(est.R, truth.R).cwiseAbs(), (est.v - truth.v).cwiseAbs(),
          (est.p - truth.p).cwiseAbs()};
}

/// Linear error flow d xi/dt = A xi, RK4 with `substeps` per input interval,
/// using the same held ground inputs as the filter.
inline std::vector<Tangent9> integrate_linear_flow(const Tangent9& xi0,
                                                   const std::vector<ImuSample>& ground,
                                                   const std::vector<double>& times, int substeps) {
  std::vector<Tangent9> out{xi0};
  Tangent9 xi = xi0;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const Mat9 a = matrix_A(ground[k].omega, ground[k].accel);
    const double h = (times[k + 1] - times[k]) / substeps;
    for (int s = 0; s < substeps; ++s) {
      const Tangent9 k1 = a * xi;
      const Tangent9 k2 = a * (xi + 0.5 * h * k1);
      const Tangent9 k3 = a * (xi + 0.5 * h * k2);
      const Tangent9 k4 = a * (xi + h * k3);
      xi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out.push_back(xi);
  }
  return out;
}

/// Largest deviation of log(Xbar X^-1) from the linear flow when the true
/// state and an estimate offset by exp(xi0) are propagated noise-free.
inline double log_linear_deviation(const Scenario& scenario, const Tangent9& xi0,
                                   double duration) {
  Scenario s = noise_free(scenario);
  s.rig.ground_rate = s.rig.robot_rate;
  const double dt = 1.0 / s.rig.robot_rate;
  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  std::vector<ImuSample> robot, ground;
  std::vector<double> times;
  for (std::size_t i = 0; i <= steps; ++i) {
    robot.push_back(robot_imu_sample(s, i));
    ground.push_back(ground_imu_sample(s, i));
    times.push_back(robot.back().t);
  }
  const std::vector<Tangent9> flow = integrate_linear_flow(xi0, ground, times, 10);
  SE23 x = ground_truth(0.0, s).relative;
  SE23 xbar = exp_se23(xi0) * x;
  double worst = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    x = propagate_mean(x, robot[k], ground[k], dt);
    xbar = propagate_mean(xbar, robot[k], ground[k], dt);
    const Tangent9 xi = log_se23(xbar * x.inverse());
    worst = std::max(worst, (xi - flow[k + 1]).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace harness
