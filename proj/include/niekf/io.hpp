#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "niekf/filter.hpp"
#include "niekf/kinematics.hpp"
#include "niekf/models.hpp"
#include "niekf/report.hpp"
#include "niekf/sim.hpp"

namespace niekf {

/// Malformed CSV input; `line()` is 1-based and counts the header.
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& path, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Shortest %g text (15 to 17 significant digits) that round-trips.
std::string format_double(double x);

/// Unit quaternion (w, x, y, z) with w >= 0.
Eigen::Vector4d rotation_to_quaternion(const Mat3& r);
Mat3 quaternion_to_rotation(const Eigen::Vector4d& q);

/// Pose of a frame in the world as stored in truth.csv.
struct WorldPose {
  Mat3 R = Mat3::Identity();
  Vec3 v = Vec3::Zero();
  Vec3 p = Vec3::Zero();
};

/// One row of truth.csv.
struct TruthRow {
  double t = 0.0;
  SE23 relative;
  WorldPose ground;
  WorldPose base;
  Vec3 foot = Vec3::Zero();
};

TruthRow truth_row(const GroundTruthRecord& rec);

void write_imu_csv(const std::string& path, const std::vector<ImuSample>& samples);
std::vector<ImuSample> read_imu_csv(const std::string& path, Frame frame);

/// Header t,q1..qN,qd1..qdN.
void write_encoders_csv(const std::string& path, const std::vector<JointState>& samples);
/// Accepts the full schema or t,q1..qN; without rate columns the rates are
/// backward differences of q.
std::vector<JointState> read_encoders_csv(const std::string& path);

void write_truth_csv(const std::string& path, const std::vector<TruthRow>& rows);
std::vector<TruthRow> read_truth_csv(const std::string& path);

void write_trace_csv(const std::string& path, const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> read_trace_csv(const std::string& path);

std::vector<StateSample> relative_states(const std::vector<TruthRow>& rows);
std::vector<StateSample> trace_states(const std::vector<TraceRecord>& trace);

/// Reads imu_robot.csv, imu_ground.csv and encoders.csv from `dir`.
SensorLog read_sensor_log(const std::string& dir);
void write_sensor_log(const std::string& dir, const SensorLog& log);

}  // namespace niekf
