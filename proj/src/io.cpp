#include "niekf/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/Geometry>

namespace niekf {

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> lines;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& path, std::size_t line, const std::string& cell) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && *begin == ' ') ++begin;
  if (begin < end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || begin == end) {
    throw CsvError(path, line, "cannot parse '" + cell + "' as a number");
  }
  return value;
}

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Table t;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (number == 1) {
      t.header = split(line);
      if (t.header.empty() || t.header.front() != "t") {
        throw CsvError(path, 1, "header must start with 't'");
      }
      continue;
    }
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size()) {
      throw CsvError(path, number, "expected " + std::to_string(t.header.size()) +
                                       " fields, found " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_cell(path, number, c));
    t.rows.push_back(std::move(row));
    t.lines.push_back(number);
  }
  if (number == 0) throw CsvError(path, 1, "missing header");
  return t;
}

void require_header(const std::string& path, const Table& t,
                    const std::vector<std::string>& expected) {
  if (t.header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    throw CsvError(path, 1, "expected header " + want);
  }
}

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path);
  }
  void header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) out_ << (i ? "," : "") << names[i];
    out_ << '\n';
  }
  Writer& operator<<(double x) {
    out_ << (first_ ? "" : ",") << format_double(x);
    first_ = false;
    return *this;
  }
  template <typename Derived>
  Writer& put(const Eigen::MatrixBase<Derived>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) *this << v(i);
    return *this;
  }
  void end_row() {
    out_ << '\n';
    first_ = true;
  }

 private:
  std::ofstream out_;
  bool first_ = true;
};

std::vector<std::string> with_prefix(const std::string& prefix,
                                     const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& n : names) out.push_back(prefix + n);
  return out;
}

const std::vector<std::string> kPoseColumns = {"qw", "qx", "qy", "qz", "vx", "vy",
                                               "vz", "px", "py", "pz"};

std::vector<std::string> truth_header() {
  std::vector<std::string> h = {"t"};
  for (const auto* prefix : {"", "dW", "bW"}) {
    const auto cols = with_prefix(prefix, kPoseColumns);
    h.insert(h.end(), cols.begin(), cols.end());
  }
  h.insert(h.end(), {"footx", "footy", "footz"});
  return h;
}

std::vector<std::string> trace_header() {
  std::vector<std::string> h = {"t"};
  h.insert(h.end(), kPoseColumns.begin(), kPoseColumns.end());
  for (int i = 1; i <= 9; ++i) h.push_back("P" + std::to_string(i) + std::to_string(i));
  h.push_back("innov_norm");
  return h;
}

void put_pose(Writer& w, const Mat3& r, const Vec3& v, const Vec3& p) {
  w.put(rotation_to_quaternion(r)).put(v).put(p);
}

void get_pose(const std::vector<double>& row, std::size_t at, Mat3& r, Vec3& v, Vec3& p) {
  r = quaternion_to_rotation(Eigen::Vector4d(row[at], row[at + 1], row[at + 2], row[at + 3]));
  v = Vec3(row[at + 4], row[at + 5], row[at + 6]);
  p = Vec3(row[at + 7], row[at + 8], row[at + 9]);
}

const std::vector<std::string> kImuHeader = {"t", "wx", "wy", "wz", "ax", "ay", "az"};

}  // namespace

CsvError::CsvError(const std::string& path, std::size_t line, const std::string& what)
    : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

std::string format_double(double x) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (precision == 17 || std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

Eigen::Vector4d rotation_to_quaternion(const Mat3& r) {
  Eigen::Quaterniond q(r);
  q.normalize();
  Eigen::Vector4d out(q.w(), q.x(), q.y(), q.z());
  if (out[0] < 0.0) out = -out;
  return out;
}

Mat3 quaternion_to_rotation(const Eigen::Vector4d& q) {
  if (!(q.norm() > 0.0)) throw std::invalid_argument("zero quaternion");
  return Eigen::Quaterniond(q[0], q[1], q[2], q[3]).normalized().toRotationMatrix();
}

TruthRow truth_row(const GroundTruthRecord& rec) {
  TruthRow row;
  row.t = rec.t;
  row.relative = rec.relative;
  row.ground = {rec.ground.R, rec.ground.v, rec.ground.p};
  row.base = {rec.base.R, rec.base.v, rec.base.p};
  row.foot = rec.foot;
  return row;
}

void write_imu_csv(const std::string& path, const std::vector<ImuSample>& samples) {
  Writer w(path);
  w.header(kImuHeader);
  for (const auto& s : samples) {
    (w << s.t).put(s.omega).put(s.accel);
    w.end_row();
  }
}

std::vector<ImuSample> read_imu_csv(const std::string& path, Frame frame) {
  const Table t = read_table(path);
  require_header(path, t, kImuHeader);
  std::vector<ImuSample> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) {
    ImuSample s;
    s.t = r[0];
    s.omega = Vec3(r[1], r[2], r[3]);
    s.accel = Vec3(r[4], r[5], r[6]);
    s.frame = frame;
    out.push_back(s);
  }
  return out;
}

void write_encoders_csv(const std::string& path, const std::vector<JointState>& samples) {
  Writer w(path);
  const Eigen::Index n = samples.empty() ? 0 : samples.front().q.size();
  std::vector<std::string> h = {"t"};
  for (Eigen::Index i = 1; i <= n; ++i) h.push_back("q" + std::to_string(i));
  for (Eigen::Index i = 1; i <= n; ++i) h.push_back("qd" + std::to_string(i));
  w.header(h);
  for (const auto& s : samples) {
    if (s.q.size() != n || s.qdot.size() != n) {
      throw std::invalid_argument("encoder samples have inconsistent joint counts");
    }
    (w << s.t).put(s.q).put(s.qdot);
    w.end_row();
  }
}

std::vector<JointState> read_encoders_csv(const std::string& path) {
  const Table t = read_table(path);
  std::size_t nq = 0;
  while (nq + 1 < t.header.size() && t.header[nq + 1] == "q" + std::to_string(nq + 1)) ++nq;
  if (nq == 0) throw CsvError(path, 1, "expected joint columns q1..qN");
  const bool rates = t.header.size() == 1 + 2 * nq;
  if (!rates && t.header.size() != 1 + nq) {
    throw CsvError(path, 1, "expected header t,q1..qN[,qd1..qdN]");
  }
  for (std::size_t i = 1; rates && i <= nq; ++i) {
    if (t.header[nq + i] != "qd" + std::to_string(i)) {
      throw CsvError(path, 1, "expected column qd" + std::to_string(i));
    }
  }
  std::vector<JointState> out;
  out.reserve(t.rows.size());
  const auto n = static_cast<Eigen::Index>(nq);
  for (const auto& r : t.rows) {
    JointState j;
    j.t = r[0];
    j.q = Eigen::Map<const VecX>(r.data() + 1, n);
    j.qdot = rates ? VecX(Eigen::Map<const VecX>(r.data() + 1 + nq, n)) : VecX::Zero(n);
    out.push_back(std::move(j));
  }
  if (!rates) backward_difference_rates(out);
  return out;
}

void write_truth_csv(const std::string& path, const std::vector<TruthRow>& rows) {
  Writer w(path);
  w.header(truth_header());
  for (const auto& r : rows) {
    w << r.t;
    put_pose(w, r.relative.R, r.relative.v, r.relative.p);
    put_pose(w, r.ground.R, r.ground.v, r.ground.p);
    put_pose(w, r.base.R, r.base.v, r.base.p);
    w.put(r.foot);
    w.end_row();
  }
}

std::vector<TruthRow> read_truth_csv(const std::string& path) {
  const Table t = read_table(path);
  require_header(path, t, truth_header());
  std::vector<TruthRow> out;
  out.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    TruthRow row;
    row.t = r[0];
    try {
      get_pose(r, 1, row.relative.R, row.relative.v, row.relative.p);
      get_pose(r, 11, row.ground.R, row.ground.v, row.ground.p);
      get_pose(r, 21, row.base.R, row.base.v, row.base.p);
    } catch (const std::invalid_argument& e) {
      throw CsvError(path, t.lines[i], e.what());
    }
    row.foot = Vec3(r[31], r[32], r[33]);
    out.push_back(row);
  }
  return out;
}

void write_trace_csv(const std::string& path, const std::vector<TraceRecord>& trace) {
  Writer w(path);
  w.header(trace_header());
  for (const auto& r : trace) {
    w << r.t;
    put_pose(w, r.X.R, r.X.v, r.X.p);
    w.put(r.P_diag) << r.innovation_norm;
    w.end_row();
  }
}

std::vector<TraceRecord> read_trace_csv(const std::string& path) {
  const Table t = read_table(path);
  require_header(path, t, trace_header());
  std::vector<TraceRecord> out;
  out.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    TraceRecord rec;
    rec.t = r[0];
    try {
      get_pose(r, 1, rec.X.R, rec.X.v, rec.X.p);
    } catch (const std::invalid_argument& e) {
      throw CsvError(path, t.lines[i], e.what());
    }
    for (int k = 0; k < 9; ++k) rec.P_diag[k] = r[static_cast<std::size_t>(11 + k)];
    rec.innovation_norm = r[20];
    out.push_back(rec);
  }
  return out;
}

std::vector<StateSample> relative_states(const std::vector<TruthRow>& rows) {
  std::vector<StateSample> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back({r.t, r.relative});
  return out;
}

std::vector<StateSample> trace_states(const std::vector<TraceRecord>& trace) {
  std::vector<StateSample> out;
  out.reserve(trace.size());
  for (const auto& r : trace) out.push_back({r.t, r.X});
  return out;
}

SensorLog read_sensor_log(const std::string& dir) {
  const std::filesystem::path base(dir);
  SensorLog log;
  log.robot_imu = read_imu_csv((base / "imu_robot.csv").string(), Frame::RobotB);
  log.ground_imu = read_imu_csv((base / "imu_ground.csv").string(), Frame::GroundD);
  log.encoders = read_encoders_csv((base / "encoders.csv").string());
  return log;
}

void write_sensor_log(const std::string& dir, const SensorLog& log) {
  const std::filesystem::path base(dir);
  write_imu_csv((base / "imu_robot.csv").string(), log.robot_imu);
  write_imu_csv((base / "imu_ground.csv").string(), log.ground_imu);
  write_encoders_csv((base / "encoders.csv").string(), log.encoders);
}

}  // namespace niekf
