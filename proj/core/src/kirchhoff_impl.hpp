#pragma once

#include <array>
#include <vector>

#include "gebeam/element.hpp"
#include "gebeam/interp.hpp"
#include "gebeam/so3.hpp"

namespace gebeam::detail {

inline constexpr int kKirchhoffDofs = 15;
using VecK = Eigen::Matrix<double, kKirchhoffDofs, 1>;
template <class T>
using VecKT = Eigen::Matrix<T, kKirchhoffDofs, 1>;
template <class T>
using OpK = Eigen::Matrix<T, 3, kKirchhoffDofs>;
using OpKd = OpK<double>;

// Quadrature or collocation point with precomputed shape data.
struct EvalPoint {
  double xi = 0.0;
  double weight = 0.0;
  double J = 1.0;     // ds/dxi of the initial geometry
  double J_xi = 0.0;
  OpKd V_r;           // delta r
  OpKd V_r1;          // delta r'
  OpKd V_r2;          // delta r''
  Eigen::Vector3d L;  // three-point basis at xi (nodes -1, 1, 0)
  Eigen::Vector3d L_s;
};

// Absolute nodal values in TAN form.
template <class T>
struct TanDofs {
  Vec3<T> d1, t1, d2, t2;
  T phi1, phi2, phi3;
};

struct TanRefs {
  Matrix3d ref1, ref2, ref3;
};

template <class T>
struct PointKin {
  Vec3<T> r, r1, r2;
  Vec3<T> g1;
  Mat3<T> lambda;
  Vec3<T> K;
  T eps;
  T torsion_m;  // torsion of the intermediate (smallest-rotation) triad field
};

template <class T>
struct NodalKin {
  std::array<Mat3<T>, 3> triads;
  Vec3<T> r1_mid;
  std::array<T, 3> eps_cp;
  std::array<T, 3> phi_rel;      // SR field
  std::array<Vec3<T>, 3> Phi;    // geodesic field
};

// History of the non-objective smallest-rotation-in-time field at a point.
struct SrTimePoint {
  Matrix3d lambda_bar;
  Vector3d curvature_bar;  // material curvature of the stored intermediate triad field
};

class KirchhoffElement final : public Element {
 public:
  KirchhoffElement(const KirchhoffOptions& options, std::array<int, 3> nodes,
                   const HermiteElementGeometry& geometry, const SectionProperties& section,
                   std::vector<Node>& node_store);

  std::unique_ptr<Element> clone() const override { return std::make_unique<KirchhoffElement>(*this); }
  ElementKind kind() const override { return options_.kind; }

  ElementOutput evaluate(const std::vector<Node>& nodes, const EvalContext& ctx) const override;
  void commit(std::vector<Node>& nodes, const EvalContext& ctx) override;
  void init_dynamics(const std::vector<Node>& nodes) override;
  Momenta momenta() const override;

  Vector3d position(const std::vector<Node>& nodes, double xi) const override;
  Matrix3d triad(const std::vector<Node>& nodes, double xi) const override;
  Vector3d initial_position(double xi) const override;
  double jacobian(double xi) const override;
  double length() const override { return c_; }

  // Exposed for the consistent-spin variant.
  template <class T>
  NodalKin<T> nodal(const TanDofs<T>& x, const TanRefs& refs) const;
  template <class T>
  PointKin<T> point(const TanDofs<T>& x, const NodalKin<T>& n, const EvalPoint& p, int gp) const;
  template <class T>
  T energy_density(const PointKin<T>& k, const T& eps_bar, int gp) const;
  template <class T>
  T eps_bar(const NodalKin<T>& n, const PointKin<T>& k, const EvalPoint& p) const;

  const std::vector<EvalPoint>& gauss_points() const { return gps_; }
  const EvalPoint& collocation_point(int i) const { return cps_[i]; }
  const SectionProperties& section() const { return section_; }
  const DynamicPoints& dynamic_points() const { return dyn_; }
  bool mcs() const { return options_.locking == Locking::MCS; }

 private:
  bool strong() const;
  bool rot_layout() const { return uses_rot_layout(options_.kind); }
  bool consistent_spin() const;

  TanDofs<double> tan_values(const std::vector<Node>& nodes) const;
  TanRefs tan_refs(const std::vector<Node>& nodes) const;
  ElementOutput evaluate_tan(const TanDofs<double>& x0, const TanRefs& refs,
                             const EvalContext& ctx) const;

  template <class T>
  VecKT<T> residual_petrov(const TanDofs<T>& x, const TanRefs& refs, const EvalContext& ctx,
                           T& energy) const;
  EvalPoint make_point(double xi, double weight) const;

  KirchhoffOptions options_;
  SectionProperties section_;
  double c_ = 1.0;
  std::array<Vector3d, 2> d0_, t0_;
  std::vector<EvalPoint> gps_;
  std::array<EvalPoint, 3> cps_;  // xi = -1, 1, 0
  std::vector<Vector3d> K0_;
  std::vector<SrTimePoint> sr_time_;
  DynamicPoints dyn_;

  friend ElementOutput evaluate_consistent_spin(const KirchhoffElement& e, const TanDofs<double>& x0,
                                                const TanRefs& refs, const EvalContext& ctx);
};

// Residual and stiffness of the consistent-spin (Bubnov) variants.
ElementOutput evaluate_consistent_spin(const KirchhoffElement& e, const TanDofs<double>& x0,
                                       const TanRefs& refs, const EvalContext& ctx);

template <class T>
TanDofs<T> perturbed(const TanDofs<double>& x0, const VecKT<T>& inc) {
  TanDofs<T> x;
  x.d1 = x0.d1.cast<T>() + inc.template segment<3>(0);
  x.t1 = x0.t1.cast<T>() + inc.template segment<3>(3);
  x.phi1 = x0.phi1 + inc(6);
  x.d2 = x0.d2.cast<T>() + inc.template segment<3>(7);
  x.t2 = x0.t2.cast<T>() + inc.template segment<3>(10);
  x.phi2 = x0.phi2 + inc(13);
  x.phi3 = x0.phi3 + inc(14);
  return x;
}

template <class T>
NodalKin<T> KirchhoffElement::nodal(const TanDofs<T>& x, const TanRefs& refs) const {
  NodalKin<T> n;
  n.triads[0] = so3::triad_from_tangent<T>(refs.ref1.cast<T>(), x.t1, x.phi1);
  n.triads[1] = so3::triad_from_tangent<T>(refs.ref2.cast<T>(), x.t2, x.phi2);
  // Each Hermite block of the operators is a multiple of the identity.
  auto tangent_at = [&](const EvalPoint& p) -> Vec3<T> {
    return p.V_r1(0, 0) * x.d1 + p.V_r1(0, 3) * x.t1 + p.V_r1(0, 7) * x.d2 + p.V_r1(0, 10) * x.t2;
  };
  for (int k = 0; k < 3; ++k) n.eps_cp[k] = tangent_at(cps_[k]).norm() - 1.0;
  n.r1_mid = tangent_at(cps_[2]);
  const Vec3<T> g1_mid = n.r1_mid / n.r1_mid.norm();
  n.triads[2] = so3::rotate_about_first(so3::smallest_rotation<T>(refs.ref3.cast<T>(), g1_mid), x.phi3);

  if (strong()) {
    for (int i = 0; i < 2; ++i) {
      const Mat3<T> m = so3::smallest_rotation<T>(n.triads[2], Vec3<T>(n.triads[i].col(0)));
      n.phi_rel[i] = so3::relative_angle_unchecked<T>(n.triads[i], m);
    }
    n.phi_rel[2] = T(0.0);
  } else {
    for (int i = 0; i < 2; ++i) {
      n.Phi[i] = so3::log_map<T>(Mat3<T>(n.triads[2].transpose() * n.triads[i]));
      if (value_of(n.Phi[i].norm()) >= M_PI - 1e-10)
        throw RotationRangeError("triad interpolation: nodal rotation relative to middle node >= pi");
    }
    n.Phi[2].setZero();
  }
  return n;
}

template <class T>
PointKin<T> KirchhoffElement::point(const TanDofs<T>& x, const NodalKin<T>& n, const EvalPoint& p,
                                    int gp) const {
  auto combine = [&](const OpKd& op) -> Vec3<T> {
    return op(0, 0) * x.d1 + op(0, 3) * x.t1 + op(0, 7) * x.d2 + op(0, 10) * x.t2;
  };
  PointKin<T> k;
  k.r = combine(p.V_r);
  k.r1 = combine(p.V_r1);
  k.r2 = combine(p.V_r2);
  const T r1n = k.r1.norm();
  k.g1 = k.r1 / r1n;
  k.eps = r1n - 1.0;
  const Vec3<T> kappa = k.r1.cross(k.r2) / (r1n * r1n);

  if (options_.kind == ElementKind::SkNonObjective) {
    // Intermediate triad transported from the last converged step at this point.
    const SrTimePoint& h = sr_time_.at(gp);
    const Vec3<T> gb1 = h.lambda_bar.col(0).cast<T>();
    const Vec3<T> gb2 = h.lambda_bar.col(1).cast<T>();
    const Vec3<T> gb3 = h.lambda_bar.col(2).cast<T>();
    const Vector3d k_bar = h.lambda_bar * h.curvature_bar;
    const Vec3<T> gb1_s = k_bar.cross(h.lambda_bar.col(0)).cast<T>();
    const Vec3<T> gb2_s = k_bar.cross(h.lambda_bar.col(1)).cast<T>();
    const Vec3<T> g1_s = (k.r2 - k.g1 * k.g1.dot(k.r2)) / r1n;
    const T a = gb2.dot(k.g1);
    const T b = 1.0 + gb1.dot(k.g1);
    if (!(value_of(b) > so3::kTolSR)) throw SingularSR("transported triad: antiparallel tangent");
    const Vec3<T> u = k.g1 + gb1;
    const T a_s = gb2_s.dot(k.g1) + gb2.dot(g1_s);
    const T b_s = gb1_s.dot(k.g1) + gb1.dot(g1_s);
    const Vec3<T> gm2_s = gb2_s - (a_s / b - a * b_s / (b * b)) * u - (a / b) * (g1_s + gb1_s);
    const Vec3<T> gm3 = gb3 - (gb3.dot(k.g1) / b) * u;
    const T torsion = gm3.dot(gm2_s);
    const T phi_h = p.L(0) * x.phi1 + p.L(1) * x.phi2 + p.L(2) * x.phi3;
    const T phi_s = p.L_s(0) * x.phi1 + p.L_s(1) * x.phi2 + p.L_s(2) * x.phi3;
    k.lambda = so3::rotate_about_first(so3::smallest_rotation<T>(h.lambda_bar.cast<T>(), k.g1), phi_h);
    k.K = Vec3<T>(torsion + phi_s, k.lambda.col(1).dot(kappa), k.lambda.col(2).dot(kappa));
    k.torsion_m = torsion;
  } else if (strong()) {
    const Vec3<T> g1_ref = n.triads[2].col(0);
    const T phi_h = p.L(0) * n.phi_rel[0] + p.L(1) * n.phi_rel[1];
    const T phi_s = p.L_s(0) * n.phi_rel[0] + p.L_s(1) * n.phi_rel[1];
    k.lambda = so3::rotate_about_first(so3::smallest_rotation<T>(n.triads[2], k.g1), phi_h);
    const T torsion = sr_intermediate_torsion<T>(kappa, k.g1, g1_ref);
    k.K = Vec3<T>(torsion + phi_s, k.lambda.col(1).dot(kappa), k.lambda.col(2).dot(kappa));
    k.torsion_m = torsion;
  } else {
    const Vec3<T> phi_h = p.L(0) * n.Phi[0] + p.L(1) * n.Phi[1];
    const Vec3<T> phi_s = p.L_s(0) * n.Phi[0] + p.L_s(1) * n.Phi[1];
    k.lambda = n.triads[2] * so3::exp_map<T>(phi_h);
    k.K = so3::tangent_op_inv<T>(phi_h).transpose() * phi_s;
    k.torsion_m = T(0.0);
  }
  return k;
}

template <class T>
T KirchhoffElement::eps_bar(const NodalKin<T>& n, const PointKin<T>& k, const EvalPoint& p) const {
  if (!mcs()) return k.eps;
  return p.L(0) * n.eps_cp[0] + p.L(1) * n.eps_cp[1] + p.L(2) * n.eps_cp[2];
}

template <class T>
T KirchhoffElement::energy_density(const PointKin<T>& k, const T& eps, int gp) const {
  const Vec3<T> omega = k.K - K0_[gp].cast<T>();
  const Vec3<T> m = section_.C_M().cast<T>().cwiseProduct(omega);
  return 0.5 * (omega.dot(m) + section_.EA * eps * eps);
}

}  // namespace gebeam::detail
