#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace niekf {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using Tangent9 = Eigen::Matrix<double, 9, 1>;

/// Switch point between the Taylor series and the closed trig form for the
/// well-conditioned Gamma coefficients.
inline constexpr double kSmallAngle = 1e-4;
/// Switch point for the cancellation-prone coefficients (theta - sin theta)
/// and (theta^2 + 2 cos theta - 2); below it they are summed as series.
inline constexpr double kSeriesAngle = 0.5;

/// Tangent-space block accessors. Layout is (rotation, velocity, position).
inline auto rot_part(Tangent9& xi) { return xi.segment<3>(0); }
inline auto vel_part(Tangent9& xi) { return xi.segment<3>(3); }
inline auto pos_part(Tangent9& xi) { return xi.segment<3>(6); }
inline auto rot_part(const Tangent9& xi) { return xi.segment<3>(0); }
inline auto vel_part(const Tangent9& xi) { return xi.segment<3>(3); }
inline auto pos_part(const Tangent9& xi) { return xi.segment<3>(6); }

Tangent9 make_tangent(const Vec3& xi_r, const Vec3& xi_v, const Vec3& xi_p);

/// Skew-symmetric matrix with hat3(v) * w == v.cross(w).
Mat3 hat3(const Vec3& v);
Vec3 vee3(const Mat3& s);

/// Gamma_m(phi) = sum_n [phi]x^n / (n+m)!, m in {0, 1, 2}. Gamma_0 is the
/// SO(3) exponential and Gamma_1 its left Jacobian.
Mat3 gamma(int m, const Vec3& phi);

Mat3 exp_so3(const Vec3& phi);
/// Principal SO(3) logarithm; throws std::domain_error within 1e-6 of pi.
Vec3 log_so3(const Mat3& r);

/// Project onto the nearest rotation (polar decomposition via SVD).
Mat3 nearest_rotation(const Mat3& m);

/// Element of SE_2(3): rotation plus velocity and position columns of the
/// 5x5 matrix [[R v p], [0 1 0], [0 0 1]].
struct SE23 {
  Mat3 R = Mat3::Identity();
  Vec3 v = Vec3::Zero();
  Vec3 p = Vec3::Zero();

  static SE23 identity() { return {}; }
  static SE23 from_matrix(const Mat5& m);

  Mat5 matrix() const;
  SE23 inverse() const;
  SE23 operator*(const SE23& other) const;

  /// Largest entry of |R^T R - I|.
  double orthonormality_error() const;
  /// Re-project R when its orthonormality error exceeds `threshold`.
  void reorthonormalize(double threshold);
};

Mat5 wedge_se23(const Tangent9& xi);
Tangent9 vee_se23(const Mat5& m);

SE23 exp_se23(const Tangent9& xi);
/// Throws std::domain_error when the rotation angle is within 1e-6 of pi.
Tangent9 log_se23(const SE23& x);

/// Ad_X such that (Ad_X xi)^ = X xi^ X^-1.
Mat9 adjoint(const SE23& x);

}  // namespace niekf
