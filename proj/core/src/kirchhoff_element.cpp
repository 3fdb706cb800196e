#include <cmath>

#include "gebeam/errors.hpp"
#include "gebeam/quadrature.hpp"
#include "kirchhoff_impl.hpp"

namespace gebeam {
namespace detail {

namespace {

OpKd hermite_operator(const Eigen::Vector4d& h, double c) {
  OpKd op = OpKd::Zero();
  const Matrix3d id = Matrix3d::Identity();
  op.block<3, 3>(0, 0) = h(0) * id;
  op.block<3, 3>(0, 3) = 0.5 * c * h(1) * id;
  op.block<3, 3>(0, 7) = h(2) * id;
  op.block<3, 3>(0, 10) = 0.5 * c * h(3) * id;
  return op;
}

// Columns of the three nodal rotation angles.
constexpr int kAngleCols[3] = {6, 13, 14};

Eigen::Matrix<double, 1, kKirchhoffDofs> angle_row(const Eigen::Vector3d& weights) {
  Eigen::Matrix<double, 1, kKirchhoffDofs> row = Eigen::Matrix<double, 1, kKirchhoffDofs>::Zero();
  for (int i = 0; i < 3; ++i) row(kAngleCols[i]) = weights(i);
  return row;
}

}  // namespace

KirchhoffElement::KirchhoffElement(const KirchhoffOptions& options, std::array<int, 3> nodes,
                                   const HermiteElementGeometry& geometry,
                                   const SectionProperties& section,
                                   std::vector<Node>& node_store)
    : options_(options), section_(section) {
  if (!is_kirchhoff(options.kind)) throw Error("Kirchhoff element: wrong element kind");
  section_.validate();
  nodes_.assign(nodes.begin(), nodes.end());

  const double t1n = geometry.t1.norm(), t2n = geometry.t2.norm();
  if (!(t1n > 0.0) || !(t2n > 0.0)) throw DegenerateGeometry("Kirchhoff element: zero nodal tangent");
  const std::array<Vector3d, 2> d{geometry.d1, geometry.d2};
  const std::array<Vector3d, 2> t{geometry.t1 / t1n, geometry.t2 / t2n};
  const std::array<Matrix3d, 2> triads{so3::smallest_rotation<double>(geometry.triad1, t[0]),
                                       so3::smallest_rotation<double>(geometry.triad2, t[1])};
  c_ = element_length_fixpoint(d[0], t[0], d[1], t[1]);
  d0_ = d;
  t0_ = t;

  for (int b = 0; b < 2; ++b) {
    Node& n = node_store.at(nodes[b]);
    n.d = d[b];
    n.t = t[b];
    n.phi = 0.0;
    n.tmag = 1.0;
    n.triad = triads[b];
    n.ref_triad = triads[b];
    n.layout = rot_layout() ? NodeLayout::RotEnd : NodeLayout::TanEnd;
  }

  const auto& rule = gauss_legendre(options_.locking == Locking::RI ? 3 : 4);
  for (int k = 0; k < rule.size(); ++k) gps_.push_back(make_point(rule.points[k], rule.weights[k]));
  cps_ = {make_point(-1.0, 0.0), make_point(1.0, 0.0), make_point(0.0, 0.0)};

  {
    const Vector3d r_xi = HermiteCenterline::initial(d[0], t[0], d[1], t[1], c_).derivative_xi(0.0);
    Node& mid = node_store.at(nodes[2]);
    mid.layout = NodeLayout::AngleOnly;
    mid.phi = 0.0;
    mid.ref_triad = so3::smallest_rotation<double>(geometry.triad_mid, Vector3d(r_xi.normalized()));
    mid.triad = mid.ref_triad;
  }

  const TanDofs<double> x = tan_values(node_store);
  const TanRefs refs = tan_refs(node_store);
  K0_.assign(gps_.size(), Vector3d::Zero());

  if (options_.kind == ElementKind::SkNonObjective) {
    // Start from the objective smallest-rotation field of the initial state.
    options_.kind = ElementKind::SkTan;
    const NodalKin<double> n = nodal(x, refs);
    for (int g = 0; g < static_cast<int>(gps_.size()); ++g) {
      const PointKin<double> k = point(x, n, gps_[g], g);
      sr_time_.push_back({k.lambda, k.K});
    }
    options_.kind = ElementKind::SkNonObjective;
  }
  const NodalKin<double> n = nodal(x, refs);
  for (int g = 0; g < static_cast<int>(gps_.size()); ++g) K0_[g] = point(x, n, gps_[g], g).K;
}

EvalPoint KirchhoffElement::make_point(double xi, double weight) const {
  const auto cl = HermiteCenterline::initial(d0_[0], t0_[0], d0_[1], t0_[1], c_);
  EvalPoint p;
  p.xi = xi;
  p.weight = weight;
  p.J = cl.jacobian(xi);
  p.J_xi = cl.jacobian_xi(xi);
  if (!(p.J > 0.0)) throw DegenerateGeometry("Kirchhoff element: vanishing Jacobian");
  const OpKd h1 = hermite_operator(HermiteBasis::first(xi), c_);
  p.V_r = hermite_operator(HermiteBasis::values(xi), c_);
  p.V_r1 = h1 / p.J;
  p.V_r2 = (hermite_operator(HermiteBasis::second(xi), c_) - p.J_xi / p.J * h1) / (p.J * p.J);
  const auto& basis = three_point_basis();
  p.L = basis.values(xi);
  p.L_s = basis.first(xi) / p.J;
  return p;
}

bool KirchhoffElement::strong() const {
  switch (options_.kind) {
    case ElementKind::WkTan:
    case ElementKind::WkRot:
      return false;
    default:
      return true;
  }
}

bool KirchhoffElement::consistent_spin() const {
  return options_.kind == ElementKind::SkTanCS || options_.kind == ElementKind::SkRotCS;
}

TanDofs<double> KirchhoffElement::tan_values(const std::vector<Node>& nodes) const {
  const Node& a = nodes[nodes_[0]];
  const Node& b = nodes[nodes_[1]];
  TanDofs<double> x;
  x.d1 = a.d;
  x.d2 = b.d;
  if (rot_layout()) {
    x.t1 = a.tmag * a.triad.col(0);
    x.t2 = b.tmag * b.triad.col(0);
    x.phi1 = x.phi2 = 0.0;
  } else {
    x.t1 = a.t;
    x.t2 = b.t;
    x.phi1 = a.phi;
    x.phi2 = b.phi;
  }
  x.phi3 = nodes[nodes_[2]].phi;
  return x;
}

TanRefs KirchhoffElement::tan_refs(const std::vector<Node>& nodes) const {
  const Node& a = nodes[nodes_[0]];
  const Node& b = nodes[nodes_[1]];
  TanRefs refs;
  refs.ref1 = rot_layout() ? a.triad : a.ref_triad;
  refs.ref2 = rot_layout() ? b.triad : b.ref_triad;
  refs.ref3 = nodes[nodes_[2]].ref_triad;
  return refs;
}

template <class T>
VecKT<T> KirchhoffElement::residual_petrov(const TanDofs<T>& x, const TanRefs& refs,
                                           const EvalContext& ctx, T& energy) const {
  using RowK = Eigen::Matrix<T, 1, kKirchhoffDofs>;
  const NodalKin<T> n = nodal(x, refs);
  VecKT<T> r = VecKT<T>::Zero();
  energy = T(0.0);

  // Weak variant: nodal spins g1 dphi + t x dt / |t|^2.
  std::array<OpK<T>, 3> v_node;
  if (!strong()) {
    auto node_op = [](const Vec3<T>& tangent, const OpKd& v_t, int angle_col) {
      OpK<T> v = so3::skew<T>(tangent) * v_t.cast<T>() / tangent.squaredNorm();
      v.col(angle_col) += tangent / tangent.norm();
      return v;
    };
    OpKd sel = OpKd::Zero();
    sel.block<3, 3>(0, 3).setIdentity();
    v_node[0] = node_op(x.t1, sel, 6);
    sel.setZero();
    sel.block<3, 3>(0, 10).setIdentity();
    v_node[1] = node_op(x.t2, sel, 13);
    v_node[2] = node_op(n.r1_mid, cps_[2].V_r1, 14);
  }

  std::array<RowK, 3> v_eps_cp;
  if (mcs()) {
    for (int i = 0; i < 3; ++i) {
      const OpKd& op = cps_[i].V_r1;
      const Vec3<T> r1 = op(0, 0) * x.d1 + op(0, 3) * x.t1 + op(0, 7) * x.d2 + op(0, 10) * x.t2;
      v_eps_cp[i] = (r1 / r1.norm()).transpose() * op.cast<T>();
    }
  }

  const bool dynamic = ctx.dynamics != nullptr && dyn_.active();
  const Vector3d c_m = section_.C_M();
  for (int g = 0; g < static_cast<int>(gps_.size()); ++g) {
    const EvalPoint& p = gps_[g];
    const PointKin<T> k = point(x, n, p, g);
    const T eps = eps_bar(n, k, p);
    const Vec3<T> omega = k.K - K0_[g].cast<T>();
    const Vec3<T> m = k.lambda * c_m.cast<T>().cwiseProduct(omega);

    RowK v_eps;
    if (mcs())
      v_eps = p.L(0) * v_eps_cp[0] + p.L(1) * v_eps_cp[1] + p.L(2) * v_eps_cp[2];
    else
      v_eps = k.g1.transpose() * p.V_r1.cast<T>();

    OpK<T> v_theta, v_theta_s;
    if (strong()) {
      const T r1n2 = k.r1.squaredNorm();
      const OpK<T> vr1 = p.V_r1.cast<T>();
      const OpK<T> vr2 = p.V_r2.cast<T>();
      const Mat3<T> s1 = so3::skew<T>(k.r1);
      const Vec3<T> g1_s = (k.r2 - k.g1 * k.g1.dot(k.r2)) / k.r1.norm();
      const RowK l_row = angle_row(p.L).cast<T>();
      const RowK l_row_s = angle_row(p.L_s).cast<T>();
      v_theta = k.g1 * l_row + s1 * vr1 / r1n2;
      v_theta_s = g1_s * l_row + k.g1 * l_row_s + (so3::skew<T>(k.r2) * vr1 + s1 * vr2) / r1n2 -
                  (2.0 * k.r1.dot(k.r2) / (r1n2 * r1n2)) * (s1 * vr1);
    } else {
      v_theta = p.L(0) * v_node[0] + p.L(1) * v_node[1] + p.L(2) * v_node[2];
      v_theta_s = p.L_s(0) * v_node[0] + p.L_s(1) * v_node[1] + p.L_s(2) * v_node[2];
    }

    const double wj = p.weight * p.J;
    r += wj * (v_theta_s.transpose() * m + v_eps.transpose() * (section_.EA * eps));
    energy += wj * energy_density(k, eps, g);

    if (dynamic) {
      const PointRates<T> rates = point_rates<T>(*ctx.dynamics, dyn_.states[g], k.r, k.lambda);
      const Vec3<T> f = section_.rhoA * rates.a;
      const Vec3<T> m_in = inertia_moment<T>(k.lambda, rates.W, rates.A, section_.C_rho());
      r += wj * (p.V_r.cast<T>().transpose() * f + v_theta.transpose() * m_in);
    }
  }
  return r;
}

ElementOutput KirchhoffElement::evaluate_tan(const TanDofs<double>& x0, const TanRefs& refs,
                                             const EvalContext& ctx) const {
  ElementOutput out;
  if (!ctx.stiffness) {
    out.residual = residual_petrov<double>(x0, refs, ctx, out.energy);
    return out;
  }
  using D = Dual<kKirchhoffDofs>;
  VecKT<D> inc;
  for (int i = 0; i < kKirchhoffDofs; ++i) inc(i) = D(0.0, VecK::Unit(i));
  D energy;
  const VecKT<D> r = residual_petrov<D>(perturbed<D>(x0, inc), refs, ctx, energy);
  out.energy = energy.value();
  out.residual.resize(kKirchhoffDofs);
  out.stiffness.resize(kKirchhoffDofs, kKirchhoffDofs);
  for (int i = 0; i < kKirchhoffDofs; ++i) {
    out.residual(i) = r(i).value();
    out.stiffness.row(i) = r(i).derivatives().transpose();
  }
  return out;
}

ElementOutput KirchhoffElement::evaluate(const std::vector<Node>& nodes,
                                         const EvalContext& ctx) const {
  const TanDofs<double> x0 = tan_values(nodes);
  const TanRefs refs = tan_refs(nodes);
  ElementOutput out =
      consistent_spin() ? evaluate_consistent_spin(*this, x0, refs, ctx) : evaluate_tan(x0, refs, ctx);
  if (rot_layout()) out = rot_transform(out, {x0.t1, x0.t2});
  return out;
}

void KirchhoffElement::commit(std::vector<Node>& nodes, const EvalContext& ctx) {
  const TanDofs<double> x = tan_values(nodes);
  const TanRefs refs = tan_refs(nodes);
  const NodalKin<double> n = nodal(x, refs);
  std::vector<PointKin<double>> points;
  for (int g = 0; g < static_cast<int>(gps_.size()); ++g) points.push_back(point(x, n, gps_[g], g));

  if (ctx.dynamics != nullptr && dyn_.active())
    for (std::size_t g = 0; g < points.size(); ++g)
      dyn_.states[g] = update_kinematics(*ctx.dynamics, dyn_.states[g], points[g].r, points[g].lambda);

  if (options_.kind == ElementKind::SkNonObjective) {
    for (std::size_t g = 0; g < points.size(); ++g) {
      const PointKin<double>& k = points[g];
      const Matrix3d lambda_m = so3::smallest_rotation<double>(sr_time_[g].lambda_bar, k.g1);
      const Vector3d kappa = k.r1.cross(k.r2) / k.r1.squaredNorm();
      sr_time_[g].lambda_bar = lambda_m;
      sr_time_[g].curvature_bar =
          Vector3d(k.torsion_m, lambda_m.col(1).dot(kappa), lambda_m.col(2).dot(kappa));
    }
  }

  Node& mid = nodes[nodes_[2]];
  mid.ref_triad = so3::smallest_rotation<double>(mid.ref_triad, Vector3d(n.r1_mid.normalized()));
  mid.triad = so3::rotate_about_first(mid.ref_triad, mid.phi);
}

void KirchhoffElement::init_dynamics(const std::vector<Node>& nodes) {
  const TanDofs<double> x = tan_values(nodes);
  const NodalKin<double> n = nodal(x, tan_refs(nodes));
  dyn_.states.assign(gps_.size(), PointDynState{});
  for (int g = 0; g < static_cast<int>(gps_.size()); ++g) {
    const PointKin<double> k = point(x, n, gps_[g], g);
    dyn_.states[g].r = k.r;
    dyn_.states[g].lambda = k.lambda;
  }
}

Momenta KirchhoffElement::momenta() const {
  Momenta out;
  for (std::size_t g = 0; g < dyn_.states.size(); ++g) {
    const PointDynState& s = dyn_.states[g];
    const double wj = gps_[g].weight * gps_[g].J;
    const Vector3d p = section_.rhoA * s.v;
    const Vector3d c_w = section_.C_rho().cwiseProduct(s.W);
    out.linear += wj * p;
    out.angular += wj * (s.r.cross(p) + s.lambda * c_w);
    out.kinetic += 0.5 * wj * (p.dot(s.v) + s.W.dot(c_w));
  }
  return out;
}

Vector3d KirchhoffElement::position(const std::vector<Node>& nodes, double xi) const {
  const TanDofs<double> x = tan_values(nodes);
  const OpKd op = hermite_operator(HermiteBasis::values(xi), c_);
  return op(0, 0) * x.d1 + op(0, 3) * x.t1 + op(0, 7) * x.d2 + op(0, 10) * x.t2;
}

Matrix3d KirchhoffElement::triad(const std::vector<Node>& nodes, double xi) const {
  const TanDofs<double> x = tan_values(nodes);
  const TanRefs refs = tan_refs(nodes);
  const NodalKin<double> n = nodal(x, refs);
  if (options_.kind == ElementKind::SkNonObjective) {
    // The transported field only exists at the quadrature points.
    if (xi == -1.0) return n.triads[0];
    if (xi == 1.0) return n.triads[1];
    if (xi == 0.0) return n.triads[2];
    throw Unsupported("sk-sr-time: triads are only available at the nodes");
  }
  return point(x, n, make_point(xi, 0.0), -1).lambda;
}

Vector3d KirchhoffElement::initial_position(double xi) const {
  return HermiteCenterline::initial(d0_[0], t0_[0], d0_[1], t0_[1], c_).position(xi);
}

double KirchhoffElement::jacobian(double xi) const {
  return HermiteCenterline::initial(d0_[0], t0_[0], d0_[1], t0_[1], c_).jacobian(xi);
}

}  // namespace detail

ElementPtr make_kirchhoff_element(const KirchhoffOptions& options, std::array<int, 3> nodes,
                                  const HermiteElementGeometry& geometry,
                                  const SectionProperties& section, std::vector<Node>& node_store) {
  return std::make_unique<detail::KirchhoffElement>(options, nodes, geometry, section, node_store);
}

}  // namespace gebeam
