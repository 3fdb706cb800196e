#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "gebeam/errors.hpp"
#include "gebeam/quadrature.hpp"
#include "gebeam/so3.hpp"

namespace gebeam {

// Lagrange basis on a node set. Node order: xi = -1, xi = +1, then interior
// nodes in ascending order.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(std::vector<double> nodes);
  static LagrangeBasis equidistant(int n_nodes);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }

  Eigen::VectorXd values(double xi) const;
  Eigen::VectorXd first(double xi) const;
  Eigen::VectorXd second(double xi) const;

 private:
  std::vector<double> nodes_;
};

// Three-point basis on {-1, 1, 0} shared by the triad field and the
// re-interpolated strains of the Kirchhoff elements.
const LagrangeBasis& three_point_basis();

// Cubic Hermite basis on [-1, 1]; order (H_d1, H_t1, H_d2, H_t2).
struct HermiteBasis {
  static Eigen::Vector4d values(double xi);
  static Eigen::Vector4d first(double xi);
  static Eigen::Vector4d second(double xi);
};

struct CenterlinePoint {
  Vector3d r;
  Vector3d r1;  // arc-length derivative
  Vector3d r2;
};

// Hermite centerline r(xi) = sum H_d d + c/2 sum H_t t. The Jacobian refers to
// the initial geometry.
struct HermiteCenterline {
  std::array<Vector3d, 2> d;
  std::array<Vector3d, 2> t;
  double c = 0.0;
  std::array<Vector3d, 2> d0;
  std::array<Vector3d, 2> t0;

  static HermiteCenterline initial(const Vector3d& d1, const Vector3d& t1, const Vector3d& d2,
                                   const Vector3d& t2, double c);

  Vector3d position(double xi) const;
  Vector3d derivative_xi(double xi) const;
  double jacobian(double xi) const;
  double jacobian_xi(double xi) const;
};

CenterlinePoint hermite_eval(const HermiteCenterline& cl, double xi);

// Element length c for which the Hermite interpolant of the nodal data has arc
// length c. Positions and unit tangents of both end points are taken from the
// sampler at xi = -1 and xi = 1.
double element_length_fixpoint(const Vector3d& d1, const Vector3d& t1, const Vector3d& d2,
                               const Vector3d& t2);

// Arc length of a Hermite curve between -1 and xi (10-point Gauss).
double hermite_arc_length(const Vector3d& d1, const Vector3d& t1, const Vector3d& d2,
                          const Vector3d& t2, double c, double xi = 1.0);

struct LagrangeCenterline {
  std::vector<Vector3d> d;
  std::vector<Vector3d> d0;

  const LagrangeBasis& basis() const;
  Vector3d position(double xi) const;
  double jacobian(double xi) const;
};

CenterlinePoint lagrange_eval(const LagrangeCenterline& cl, double xi);

// Reference node indices (into the basis node order) used by the geodesic triad
// interpolation: the middle node, or the two middle nodes.
std::array<int, 2> geodesic_reference_nodes(const LagrangeBasis& basis);

struct TriadPoint {
  Matrix3d lambda;
  Vector3d curvature;  // material curvature K
};

// Arc-length derivative of T^-1(phi) along phi(s).
template <class T>
Mat3<T> tangent_op_inv_derivative(const Vec3<T>& phi, const Vec3<T>& phi_s) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const T a2 = phi.squaredNorm();
  T c1, c2, c3, c4;
  if (value_of(a2) < so3::kSmallAngle * so3::kSmallAngle) {
    c1 = -1.0 / 12.0 + a2 / 180.0;
    c2 = 0.5 - a2 / 24.0;
    c3 = 1.0 / 6.0 - a2 / 120.0;
    c4 = -1.0 / 60.0 + a2 / 1260.0;
  } else {
    const T a = sqrt(a2);
    const T s = sin(a), c = cos(a);
    c1 = (a * s - 2.0 * (1.0 - c)) / (a2 * a2);
    c2 = (1.0 - c) / a2;
    c3 = (1.0 - s / a) / a2;
    c4 = (3.0 * s - a * (2.0 + c)) / (a2 * a2 * a);
  }
  const Mat3<T> s = so3::skew<T>(phi);
  const Mat3<T> s_s = so3::skew<T>(phi_s);
  const T proj = phi.dot(phi_s);
  return (proj * c1) * s + c2 * s_s + c3 * (s * s_s + s_s * s) + (proj * c4) * (s * s);
}

// Triad interpolation through local rotation vectors relative to a reference
// triad in the element middle. Nodal triads follow the basis node order.
template <class T>
class GeodesicInterpolation {
 public:
  struct Point {
    Mat3<T> lambda;
    Vec3<T> K;  // material curvature
    // delta theta(s) = sum I[i] delta theta_i, and the arc-length derivatives
    std::vector<Mat3<T>> I, I_s;
  };

  GeodesicInterpolation(const std::vector<Mat3<T>>& triads, const LagrangeBasis& basis)
      : triads_(triads) {
    const auto [i, j] = geodesic_reference_nodes(basis);
    ni_ = i;
    nj_ = j;
    phi_ij_ = so3::log_map<T>(Mat3<T>(triads_[i].transpose() * triads_[j]));
    ref_ = triads_[i] * so3::exp_map<T>(Vec3<T>(0.5 * phi_ij_));
    for (const auto& t : triads_) {
      const Vec3<T> phi = so3::log_map<T>(Mat3<T>(ref_.transpose() * t));
      if (value_of(phi.norm()) >= M_PI - 1e-12)
        throw RotationRangeError("geodesic triad field: nodal rotation relative to reference >= pi");
      phi_.push_back(phi);
    }
  }

  const Mat3<T>& reference() const { return ref_; }
  const std::vector<Vec3<T>>& local_rotations() const { return phi_; }

  // l, l_s: basis values and arc-length derivatives at the evaluation point.
  Point eval(const Eigen::VectorXd& l, const Eigen::VectorXd& l_s, bool shape) const {
    const int n = static_cast<int>(phi_.size());
    Vec3<T> phi_h = Vec3<T>::Zero(), phi_s = Vec3<T>::Zero();
    for (int i = 0; i < n; ++i) {
      phi_h += l(i) * phi_[i];
      phi_s += l_s(i) * phi_[i];
    }
    const Mat3<T> t_inv = so3::tangent_op_inv<T>(phi_h);
    Point p;
    p.lambda = ref_ * so3::exp_map<T>(phi_h);
    p.K = t_inv.transpose() * phi_s;
    if (!shape) return p;

    std::vector<Mat3<T>> t_nodes;
    Mat3<T> sum_lt = Mat3<T>::Zero(), sum_lt_s = Mat3<T>::Zero();
    for (int i = 0; i < n; ++i) {
      t_nodes.push_back(so3::tangent_op<T>(phi_[i]));
      sum_lt += l(i) * t_nodes.back();
      sum_lt_s += l_s(i) * t_nodes.back();
    }
    const Mat3<T> t_inv_s = tangent_op_inv_derivative<T>(phi_h, phi_s);
    using std::tan;
    const T a = phi_ij_.norm();
    const T k = value_of(a) < so3::kSmallAngle ? T(0.25 + a * a / 192.0) : T(tan(0.25 * a) / a);
    const Mat3<T> v_i = 0.5 * (Mat3<T>::Identity() + k * so3::skew<T>(phi_ij_));
    const Mat3<T> v_j = 0.5 * (Mat3<T>::Identity() - k * so3::skew<T>(phi_ij_));
    const Mat3<T> corr = Mat3<T>::Identity() - t_inv * sum_lt;
    const Mat3<T> corr_s = -(t_inv_s * sum_lt + t_inv * sum_lt_s);
    for (int i = 0; i < n; ++i) {
      Mat3<T> m = l(i) * (t_inv * t_nodes[i]);
      Mat3<T> m_s = l_s(i) * (t_inv * t_nodes[i]) + l(i) * (t_inv_s * t_nodes[i]);
      if (i == ni_) {
        m += corr * v_i;
        m_s += corr_s * v_i;
      }
      if (i == nj_) {
        m += corr * v_j;
        m_s += corr_s * v_j;
      }
      p.I.push_back(ref_ * m * ref_.transpose());
      p.I_s.push_back(ref_ * m_s * ref_.transpose());
    }
    return p;
  }

 private:
  std::vector<Mat3<T>> triads_;
  int ni_ = 0, nj_ = 0;
  Vec3<T> phi_ij_;
  Mat3<T> ref_;
  std::vector<Vec3<T>> phi_;
};

// Double-valued convenience wrapper with a constant ds/dxi.
struct GeodesicTriadField {
  std::vector<Matrix3d> triads;  // ordered like the basis nodes
  LagrangeBasis basis;
  double jacobian = 1.0;

  GeodesicTriadField(std::vector<Matrix3d> nodal, double ds_dxi);

  Matrix3d reference() const;
  std::vector<Vector3d> local_rotations() const;
};

TriadPoint geodesic_triad_eval(const GeodesicTriadField& f, double xi);

struct ShapeMatrices {
  std::vector<Matrix3d> I;
  std::vector<Matrix3d> I_s;
};

ShapeMatrices generalized_shape_matrices(const GeodesicTriadField& f, double xi);

// Triad field built from the smallest rotation of a middle-node triad onto the
// centerline tangent plus an interpolated relative angle.
struct SRTriadField {
  HermiteCenterline centerline;
  std::array<Matrix3d, 3> triads;  // nodes at xi = -1, 1, 0
};

TriadPoint sr_triad_eval(const SRTriadField& f, double xi);

// Torsion of the smallest-rotation field sr(lambda_ref, g1(s)) in terms of the
// curvature vector kappa = r' x r'' / |r'|^2.
template <class T>
T sr_intermediate_torsion(const Vec3<T>& kappa, const Vec3<T>& g1, const Vec3<T>& g1_ref) {
  return -kappa.dot(g1_ref) / (1.0 + g1.dot(g1_ref));
}

}  // namespace gebeam
