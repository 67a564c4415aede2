#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "niekf/liegroup.hpp"

namespace niekf {

/// Intrinsic Z-Y-X angles (roll, pitch, yaw) of a rotation, in radians.
Vec3 rpy_from_rotation(const Mat3& r);

/// Roll/pitch/yaw of the error rotation R_bar R^T.
Vec3 attitude_error(const Mat3& r_bar, const Mat3& r);

/// Time-stamped (R, v, p) sample, used for both estimates and truth.
struct StateSample {
  double t = 0.0;
  SE23 X;
};

/// Row order of an RMSE record.
inline constexpr std::array<std::string_view, 9> kRmseComponents = {
    "v_x", "v_y", "v_z", "roll", "pitch", "yaw", "p_x", "p_y", "p_z"};

/// Velocity (m/s), roll/pitch/yaw (deg) and position (m) RMSEs.
struct RmseRecord {
  std::array<double, 9> values{};
  std::size_t samples = 0;
};

/// RMSE over samples with t >= steady_state_start. Throws
/// std::runtime_error naming the first sample whose timestamps differ, and
/// std::invalid_argument if no sample lies in the window.
RmseRecord rmse_report(const std::vector<StateSample>& estimate,
                       const std::vector<StateSample>& truth, double steady_state_start);

}  // namespace niekf
