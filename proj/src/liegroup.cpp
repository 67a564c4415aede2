#include "niekf/liegroup.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace niekf {

namespace {

// sum_k (-1)^k x^(2k) / (2k + offset)!, `terms` terms.
double alternating_series(double theta, int offset, int terms) {
  const double t2 = theta * theta;
  double factorial = 1.0;
  for (int i = 2; i <= offset; ++i) factorial *= i;
  double term = 1.0 / factorial;
  double sum = term;
  for (int k = 1; k < terms; ++k) {
    const int a = 2 * k + offset - 1;
    term *= -t2 / (static_cast<double>(a) * (a + 1));
    sum += term;
  }
  return sum;
}

// sin(t)/t
double coeff_a(double t) {
  return t < kSmallAngle ? alternating_series(t, 1, 5) : std::sin(t) / t;
}

// (1 - cos t)/t^2, half-angle form avoids the cancellation in 1 - cos t.
double coeff_b(double t) {
  if (t < kSmallAngle) return alternating_series(t, 2, 5);
  const double s = std::sin(0.5 * t);
  return 2.0 * s * s / (t * t);
}

// (t - sin t)/t^3
double coeff_c(double t) {
  return t < kSeriesAngle ? alternating_series(t, 3, 10)
                          : (t - std::sin(t)) / (t * t * t);
}

// (t^2 + 2 cos t - 2)/(2 t^4)
double coeff_d(double t) {
  if (t < kSeriesAngle) return alternating_series(t, 4, 10);
  const double t2 = t * t;
  return (t2 + 2.0 * std::cos(t) - 2.0) / (2.0 * t2 * t2);
}

}  // namespace

Tangent9 make_tangent(const Vec3& xi_r, const Vec3& xi_v, const Vec3& xi_p) {
  Tangent9 xi;
  xi << xi_r, xi_v, xi_p;
  return xi;
}

Mat3 hat3(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return s;
}

Vec3 vee3(const Mat3& s) { return {s(2, 1), s(0, 2), s(1, 0)}; }

Mat3 gamma(int m, const Vec3& phi) {
  const double theta = phi.norm();
  const Mat3 k = hat3(phi);
  const Mat3 k2 = k * k;
  const Mat3 eye = Mat3::Identity();
  switch (m) {
    case 0:
      return eye + coeff_a(theta) * k + coeff_b(theta) * k2;
    case 1:
      return eye + coeff_b(theta) * k + coeff_c(theta) * k2;
    case 2:
      return 0.5 * eye + coeff_c(theta) * k + coeff_d(theta) * k2;
    default:
      throw std::invalid_argument("gamma: order must be 0, 1 or 2");
  }
}

Mat3 exp_so3(const Vec3& phi) { return gamma(0, phi); }

Vec3 log_so3(const Mat3& r) {
  const Vec3 axis_sin = 0.5 * vee3(r - r.transpose());
  const double s = axis_sin.norm();
  const double c = 0.5 * (r.trace() - 1.0);
  const double theta = std::atan2(s, c);
  if (theta >= std::numbers::pi - 1e-6) {
    throw std::domain_error("log_so3: rotation angle too close to pi");
  }
  if (theta < kSmallAngle) {
    // theta / sin(theta) ~ 1 + theta^2 / 6
    return (1.0 + theta * theta / 6.0) * axis_sin;
  }
  return (theta / s) * axis_sin;
}

Mat3 nearest_rotation(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

SE23 SE23::from_matrix(const Mat5& m) {
  SE23 x;
  x.R = m.topLeftCorner<3, 3>();
  x.v = m.block<3, 1>(0, 3);
  x.p = m.block<3, 1>(0, 4);
  return x;
}

Mat5 SE23::matrix() const {
  Mat5 m = Mat5::Identity();
  m.topLeftCorner<3, 3>() = R;
  m.block<3, 1>(0, 3) = v;
  m.block<3, 1>(0, 4) = p;
  return m;
}

SE23 SE23::inverse() const {
  SE23 out;
  out.R = R.transpose();
  out.v = -out.R * v;
  out.p = -out.R * p;
  return out;
}

SE23 SE23::operator*(const SE23& other) const {
  SE23 out;
  out.R = R * other.R;
  out.v = R * other.v + v;
  out.p = R * other.p + p;
  return out;
}

double SE23::orthonormality_error() const {
  return (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff();
}

void SE23::reorthonormalize(double threshold) {
  if (orthonormality_error() > threshold) R = nearest_rotation(R);
}

Mat5 wedge_se23(const Tangent9& xi) {
  Mat5 m = Mat5::Zero();
  m.topLeftCorner<3, 3>() = hat3(rot_part(xi));
  m.block<3, 1>(0, 3) = vel_part(xi);
  m.block<3, 1>(0, 4) = pos_part(xi);
  return m;
}

Tangent9 vee_se23(const Mat5& m) {
  return make_tangent(vee3(m.topLeftCorner<3, 3>()), m.block<3, 1>(0, 3),
                      m.block<3, 1>(0, 4));
}

SE23 exp_se23(const Tangent9& xi) {
  const Vec3 phi = rot_part(xi);
  const Mat3 jl = gamma(1, phi);
  SE23 x;
  x.R = gamma(0, phi);
  x.v = jl * vel_part(xi);
  x.p = jl * pos_part(xi);
  return x;
}

Tangent9 log_se23(const SE23& x) {
  const Vec3 phi = log_so3(x.R);
  const Eigen::PartialPivLU<Mat3> jl(gamma(1, phi));
  return make_tangent(phi, jl.solve(x.v), jl.solve(x.p));
}

Mat9 adjoint(const SE23& x) {
  Mat9 ad = Mat9::Zero();
  ad.block<3, 3>(0, 0) = x.R;
  ad.block<3, 3>(3, 0) = hat3(x.v) * x.R;
  ad.block<3, 3>(3, 3) = x.R;
  ad.block<3, 3>(6, 0) = hat3(x.p) * x.R;
  ad.block<3, 3>(6, 6) = x.R;
  return ad;
}

}  // namespace niekf
