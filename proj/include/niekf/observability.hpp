#pragma once

#include <vector>

#include <Eigen/Core>

#include "niekf/filter.hpp"
#include "niekf/kinematics.hpp"
#include "niekf/models.hpp"

namespace niekf {

using MatX = Eigen::MatrixXd;

enum class ObservabilityClass { FullyObservable, YawAndPositionUnobservable, Other };

const char* to_string(ObservabilityClass c);

struct RankResult {
  int rank = 0;
  Eigen::VectorXd singular_values;
  /// Orthonormal basis of the numerical null space, one column per vector.
  MatX null_space;
};

/// Numeric rank: singular values above tol * sigma_max count. Throws
/// std::invalid_argument for an empty matrix or tol <= 0.
RankResult rank_and_nullspace(const MatX& m, double tol);

struct ObservabilityReport {
  MatX O;
  int rank = 0;
  Eigen::VectorXd singular_values;
  std::vector<Tangent9> null_space;
  ObservabilityClass classification = ObservabilityClass::Other;
};

/// Stacks H_{j} Phi_{j-1} ... Phi_0 for j = 0..k-1. `states[j]` is the
/// linearization point at step j; Phi_j spans states[j].t -> states[j+1].t
/// using inputs_d[j]. The rank tolerance is max(rows, 9) * 1e-10 relative
/// to sigma_max.
ObservabilityReport build_observability(const std::vector<FilterState>& states,
                                        const std::vector<ImuSample>& inputs_d,
                                        const std::vector<JointState>& joints,
                                        const KinematicChain& chain, int k);

/// Classify a null space: rank 9 is fully observable; rank 5 whose null space
/// is the position block plus one rotation direction (with zero velocity
/// part) parallel to `accel_d` is the stationary-ground pattern.
ObservabilityClass classify(int rank, const std::vector<Tangent9>& null_space,
                            const Vec3& accel_d);

}  // namespace niekf
