#include "niekf/report.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace niekf {

Vec3 rpy_from_rotation(const Mat3& r) {
  const double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
  const double roll = std::atan2(r(2, 1), r(2, 2));
  const double yaw = std::atan2(r(1, 0), r(0, 0));
  return {roll, pitch, yaw};
}

Vec3 attitude_error(const Mat3& r_bar, const Mat3& r) {
  return rpy_from_rotation(r_bar * r.transpose());
}

RmseRecord rmse_report(const std::vector<StateSample>& estimate,
                       const std::vector<StateSample>& truth, double steady_state_start) {
  if (estimate.size() != truth.size()) {
    throw std::runtime_error("rmse: estimate has " + std::to_string(estimate.size()) +
                             " samples but truth has " + std::to_string(truth.size()));
  }
  constexpr double kDeg = 180.0 / std::numbers::pi;
  std::array<double, 9> sum{};
  RmseRecord out;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    if (std::abs(estimate[i].t - truth[i].t) > 1e-9) {
      throw std::runtime_error("rmse: timestamps differ at row " + std::to_string(i) + " (" +
                               std::to_string(estimate[i].t) + " vs " +
                               std::to_string(truth[i].t) + ")");
    }
    if (estimate[i].t < steady_state_start) continue;
    const SE23& e = estimate[i].X;
    const SE23& g = truth[i].X;
    const Vec3 dv = e.v - g.v;
    const Vec3 rpy = attitude_error(e.R, g.R) * kDeg;
    const Vec3 dp = e.p - g.p;
    for (int k = 0; k < 3; ++k) {
      sum[static_cast<std::size_t>(k)] += dv[k] * dv[k];
      sum[static_cast<std::size_t>(3 + k)] += rpy[k] * rpy[k];
      sum[static_cast<std::size_t>(6 + k)] += dp[k] * dp[k];
    }
    ++out.samples;
  }
  if (out.samples == 0) throw std::invalid_argument("rmse: no samples after steady-state start");
  for (std::size_t k = 0; k < 9; ++k) {
    out.values[k] = std::sqrt(sum[k] / static_cast<double>(out.samples));
  }
  return out;
}

}  // namespace niekf
