#include "niekf/observability.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/SVD>

namespace niekf {

const char* to_string(ObservabilityClass c) {
  switch (c) {
    case ObservabilityClass::FullyObservable:
      return "FullyObservable";
    case ObservabilityClass::YawAndPositionUnobservable:
      return "YawAndPositionUnobservable";
    case ObservabilityClass::Other:
      break;
  }
  return "Other";
}

RankResult rank_and_nullspace(const MatX& m, double tol) {
  if (m.size() == 0) throw std::invalid_argument("rank_and_nullspace: empty matrix");
  if (!(tol > 0.0)) throw std::invalid_argument("rank_and_nullspace: tol must be positive");
  // Pad short matrices so V is always the full column basis.
  MatX padded = m;
  if (m.rows() < m.cols()) {
    padded = MatX::Zero(m.cols(), m.cols());
    padded.topRows(m.rows()) = m;
  }
  const Eigen::JacobiSVD<MatX> svd(padded, Eigen::ComputeFullV);
  RankResult out;
  out.singular_values = svd.singularValues().head(std::min(m.rows(), m.cols()));
  const double sigma_max = svd.singularValues()(0);
  const double cutoff = tol * sigma_max;
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (sigma_max > 0.0 && svd.singularValues()(i) > cutoff) ++rank;
  }
  out.rank = rank;
  out.null_space = svd.matrixV().rightCols(m.cols() - rank);
  return out;
}

ObservabilityClass classify(int rank, const std::vector<Tangent9>& null_space,
                            const Vec3& accel_d) {
  if (rank == 9) return ObservabilityClass::FullyObservable;
  if (rank != 5 || null_space.size() != 4 || accel_d.norm() == 0.0) {
    return ObservabilityClass::Other;
  }
  MatX basis(9, 4);
  for (int i = 0; i < 4; ++i) basis.col(i) = null_space[static_cast<std::size_t>(i)];
  const MatX projector = basis * basis.transpose();
  auto contained = [&](const Tangent9& u) {
    return ((Mat9::Identity() - projector) * u).norm() < 1e-6;
  };
  for (int i = 0; i < 3; ++i) {
    Tangent9 e = Tangent9::Zero();
    e(6 + i) = 1.0;
    if (!contained(e)) return ObservabilityClass::Other;
  }
  const Tangent9 yaw = make_tangent(accel_d.normalized(), Vec3::Zero(), Vec3::Zero());
  return contained(yaw) ? ObservabilityClass::YawAndPositionUnobservable
                        : ObservabilityClass::Other;
}

ObservabilityReport build_observability(const std::vector<FilterState>& states,
                                        const std::vector<ImuSample>& inputs_d,
                                        const std::vector<JointState>& joints,
                                        const KinematicChain& chain, int k) {
  if (k < 1) throw std::invalid_argument("build_observability: k must be positive");
  const auto steps = static_cast<std::size_t>(k);
  if (states.size() < steps || inputs_d.size() < steps || joints.size() < steps) {
    throw std::invalid_argument("build_observability: input lists shorter than k");
  }
  ObservabilityReport report;
  report.O = MatX::Zero(3 * k, 9);
  Mat9 transition = Mat9::Identity();
  for (std::size_t j = 0; j < steps; ++j) {
    if (j > 0) {
      const double dt = states[j].t - states[j - 1].t;
      transition = phi_blocks(inputs_d[j - 1].omega, inputs_d[j - 1].accel, dt) * transition;
    }
    const Mat3x9 h = jacobian_H(states[j].X, inputs_d[j].omega, joints[j], chain);
    report.O.block(static_cast<Eigen::Index>(3 * j), 0, 3, 9) = h * transition;
  }
  const double tol = static_cast<double>(std::max<Eigen::Index>(report.O.rows(), 9)) * 1e-10;
  const RankResult rr = rank_and_nullspace(report.O, tol);
  report.rank = rr.rank;
  report.singular_values = rr.singular_values;
  for (Eigen::Index i = 0; i < rr.null_space.cols(); ++i) {
    report.null_space.push_back(rr.null_space.col(i));
  }
  report.classification = classify(report.rank, report.null_space, inputs_d.front().accel);
  return report;
}

}  // namespace niekf
