#pragma once

#include <cmath>

#include <Eigen/Core>

#include "gebeam/errors.hpp"
#include "gebeam/scalar.hpp"

namespace gebeam::so3 {

// Below this angle the closed-form coefficients are replaced by series.
inline constexpr double kSmallAngle = 1e-4;
inline constexpr double kTolSR = 1e-8;

template <class T>
Mat3<T> skew(const Vec3<T>& v) {
  Mat3<T> s;
  s << T(0), -v(2), v(1), v(2), T(0), -v(0), -v(1), v(0), T(0);
  return s;
}

template <class T>
Vec3<T> axial(const Mat3<T>& m) {
  return Vec3<T>(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)) * 0.5;
}

template <class T>
Mat3<T> exp_map(const Vec3<T>& psi) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const T angle2 = psi.squaredNorm();
  T a, b;
  if (value_of(angle2) < kSmallAngle * kSmallAngle) {
    a = 1.0 - angle2 / 6.0 + angle2 * angle2 / 120.0;
    b = 0.5 - angle2 / 24.0 + angle2 * angle2 / 720.0;
  } else {
    const T angle = sqrt(angle2);
    a = sin(angle) / angle;
    b = (1.0 - cos(angle)) / angle2;
  }
  const Mat3<T> s = skew(psi);
  return Mat3<T>::Identity() + a * s + b * s * s;
}

template <class T>
struct Quaternion {
  T w;
  Vec3<T> v;
};

// Spurrier's algorithm; returns the representative with w >= 0.
template <class T>
Quaternion<T> quaternion_from_triad(const Mat3<T>& r) {
  using std::sqrt;
  const T trace = r.trace();
  Quaternion<T> q;
  const double tr = value_of(trace);
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (value_of(r(i, i)) > value_of(r(k, k))) k = i;
  if (tr >= value_of(r(k, k))) {
    q.w = 0.5 * sqrt(1.0 + trace);
    q.v(0) = (r(2, 1) - r(1, 2)) / (4.0 * q.w);
    q.v(1) = (r(0, 2) - r(2, 0)) / (4.0 * q.w);
    q.v(2) = (r(1, 0) - r(0, 1)) / (4.0 * q.w);
  } else {
    const int i = k;
    const int j = (i + 1) % 3;
    const int l = (i + 2) % 3;
    q.v(i) = sqrt(0.5 * r(i, i) + 0.25 * (1.0 - trace));
    q.w = (r(l, j) - r(j, l)) / (4.0 * q.v(i));
    q.v(j) = (r(j, i) + r(i, j)) / (4.0 * q.v(i));
    q.v(l) = (r(l, i) + r(i, l)) / (4.0 * q.v(i));
  }
  if (value_of(q.w) < 0.0) {
    q.w = -q.w;
    q.v = -q.v;
  }
  return q;
}

// Rotation vector with angle in [0, pi]. At an angle of exactly pi the axis is
// oriented so that its largest-magnitude component is positive.
template <class T>
Vec3<T> log_map(const Mat3<T>& r) {
  using std::atan2;
  using std::sqrt;
  Quaternion<T> q = quaternion_from_triad(r);
  const T s2 = q.v.squaredNorm();
  if (std::abs(value_of(q.w)) < 1e-15) {
    int k = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(value_of(q.v(i))) > std::abs(value_of(q.v(k)))) k = i;
    if (value_of(q.v(k)) < 0.0) {
      q.v = -q.v;
      q.w = -q.w;
    }
  }
  if (value_of(s2) < 0.25 * kSmallAngle * kSmallAngle) {
    // atan(x)/x series with x = |v|/w
    const T x2 = s2 / (q.w * q.w);
    return q.v * (2.0 / q.w * (1.0 - x2 / 3.0 + x2 * x2 / 5.0));
  }
  const T s = sqrt(s2);
  return q.v * (2.0 * atan2(s, q.w) / s);
}

// delta psi = T(psi) * delta theta
template <class T>
Mat3<T> tangent_op(const Vec3<T>& psi) {
  using std::sqrt;
  using std::tan;
  const T angle2 = psi.squaredNorm();
  T c, d;  // c = (psi/2) cot(psi/2), d = (1 - c) / psi^2
  if (value_of(angle2) < kSmallAngle * kSmallAngle) {
    c = 1.0 - angle2 / 12.0 - angle2 * angle2 / 720.0;
    d = 1.0 / 12.0 + angle2 / 720.0;
  } else {
    const T angle = sqrt(angle2);
    c = 0.5 * angle / tan(0.5 * angle);
    d = (1.0 - c) / angle2;
  }
  return c * Mat3<T>::Identity() + d * psi * psi.transpose() - 0.5 * skew(psi);
}

// delta theta = T^-1(psi) * delta psi
template <class T>
Mat3<T> tangent_op_inv(const Vec3<T>& psi) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const T angle2 = psi.squaredNorm();
  T a, e, b;  // a = sin/psi, e = (1 - a)/psi^2, b = (1 - cos)/psi^2
  if (value_of(angle2) < kSmallAngle * kSmallAngle) {
    a = 1.0 - angle2 / 6.0 + angle2 * angle2 / 120.0;
    e = 1.0 / 6.0 - angle2 / 120.0 + angle2 * angle2 / 5040.0;
    b = 0.5 - angle2 / 24.0 + angle2 * angle2 / 720.0;
  } else {
    const T angle = sqrt(angle2);
    a = sin(angle) / angle;
    e = (1.0 - a) / angle2;
    b = (1.0 - cos(angle)) / angle2;
  }
  return a * Mat3<T>::Identity() + e * psi * psi.transpose() + b * skew(psi);
}

// Rotates lambda_bar so that its first column becomes g1 along the shortest path.
template <class T>
Mat3<T> smallest_rotation(const Mat3<T>& lambda_bar, const Vec3<T>& g1) {
  const Vec3<T> gb1 = lambda_bar.col(0);
  const T denom = 1.0 + gb1.dot(g1);
  if (!(value_of(denom) > kTolSR))
    throw SingularSR("smallest rotation: first base vectors are antiparallel");
  const Vec3<T> sum = g1 + gb1;
  Mat3<T> out;
  out.col(0) = g1;
  for (int i = 1; i < 3; ++i) {
    const Vec3<T> gbi = lambda_bar.col(i);
    out.col(i) = gbi - (gbi.dot(g1) / denom) * sum;
  }
  return out;
}

// Rotates a triad about its own first base vector.
template <class T, class A>
Mat3<T> rotate_about_first(const Mat3<T>& lambda, const A& angle) {
  using std::cos;
  using std::sin;
  const T c = cos(angle);
  const T s = sin(angle);
  Mat3<T> out;
  out.col(0) = lambda.col(0);
  out.col(1) = c * lambda.col(1) + s * lambda.col(2);
  out.col(2) = c * lambda.col(2) - s * lambda.col(1);
  return out;
}

// Angle phi with exp(S(phi g1)) lambda_m = lambda, in (-pi, pi].
template <class T>
T relative_angle_unchecked(const Mat3<T>& lambda, const Mat3<T>& lambda_m) {
  using std::atan2;
  const Vec3<T> g2 = lambda.col(1);
  T phi = atan2(g2.dot(lambda_m.col(2)), g2.dot(lambda_m.col(1)));
  if (value_of(phi) <= -M_PI) phi += 2.0 * M_PI;
  return phi;
}

template <class T>
T relative_angle(const Mat3<T>& lambda, const Mat3<T>& lambda_m) {
  if ((values_of(lambda.col(0)) - values_of(lambda_m.col(0))).norm() > 1e-10)
    throw FirstAxisMismatch("relative angle: triads do not share the first base vector");
  return relative_angle_unchecked(lambda, lambda_m);
}

// Triad with first column t/|t| obtained from lambda_m by the smallest rotation
// followed by a rotation phi about the tangent.
template <class T>
Mat3<T> triad_from_tangent(const Mat3<T>& lambda_m, const Vec3<T>& t, const T& phi) {
  const Vec3<T> g1 = t / t.norm();
  return rotate_about_first(smallest_rotation(lambda_m, g1), phi);
}

struct TanTransforms {
  Eigen::Matrix4d T_M;
  Eigen::Matrix4d T_M_inv;
  Eigen::Matrix4d T_tilde;
  Eigen::Matrix4d T_tilde_inv;
};

// Maps between (delta theta, delta |t|) and (delta t, delta Theta_1 / delta phi).
TanTransforms tan_param_transforms(const Vector3d& t, const Vector3d& g1_bar);

// Row vector d Theta_M1 / d t of the smallest-rotation triad.
Eigen::RowVector3d theta_m1_t(const Vector3d& t, const Vector3d& g1_bar);

}  // namespace gebeam::so3
