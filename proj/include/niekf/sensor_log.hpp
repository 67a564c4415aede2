#pragma once

#include <cstddef>
#include <vector>

#include "niekf/kinematics.hpp"
#include "niekf/models.hpp"

namespace niekf {

/// Time-stamped sensor streams of one run.
struct SensorLog {
  std::vector<ImuSample> robot_imu;
  std::vector<ImuSample> ground_imu;
  std::vector<JointState> encoders;

  /// Throws std::runtime_error if the robot stream is empty or any stream's
  /// timestamps regress; the message names the stream and sample index.
  void validate() const;
};

/// Zero-order-hold view of a time-sorted stream: `at(t)` returns the last
/// sample with timestamp <= t (or the first sample when t precedes it).
/// Queries must be non-decreasing in t.
template <typename Sample>
class HoldCursor {
 public:
  explicit HoldCursor(const std::vector<Sample>& samples) : samples_(samples) {}

  bool empty() const { return samples_.empty(); }

  const Sample& at(double t) {
    while (index_ + 1 < samples_.size() && samples_[index_ + 1].t <= t + kTimeEps) ++index_;
    return samples_[index_];
  }

  std::size_t index() const { return index_; }

  /// True when sample `index()` was not yet reported through `take_fresh`.
  bool take_fresh(double t) {
    at(t);
    if (samples_.empty() || samples_[index_].t > t + kTimeEps) return false;
    if (consumed_ && consumed_index_ == index_) return false;
    consumed_ = true;
    consumed_index_ = index_;
    return true;
  }

  static constexpr double kTimeEps = 1e-9;

 private:
  const std::vector<Sample>& samples_;
  std::size_t index_ = 0;
  bool consumed_ = false;
  std::size_t consumed_index_ = 0;
};

}  // namespace niekf
