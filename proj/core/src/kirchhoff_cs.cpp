#include "kirchhoff_impl.hpp"

namespace gebeam::detail {

namespace {

using D1 = Dual<kKirchhoffDofs>;
using D2 = Dual2<kKirchhoffDofs>;
using GradK = Eigen::Matrix<D1, kKirchhoffDofs, 1>;

// d Theta_M1 / d t of the smallest rotation sr(ref, t / |t|).
Eigen::Matrix<D1, 1, 3> theta_m1_t_dual(const Vec3<D1>& t, const Vector3d& g1_ref) {
  const D1 tn = t.norm();
  const Vec3<D1> g1 = t / tn;
  const Vec3<D1> axis = g1_ref.cast<D1>().cross(g1);
  return -axis.transpose() / (tn * (1.0 + g1.dot(g1_ref.cast<D1>())));
}

Vec3<D1> values_d1(const Vec3<D2>& v) {
  return {v(0).value(), v(1).value(), v(2).value()};
}

Mat3<D1> values_d1(const Mat3<D2>& m) {
  Mat3<D1> out;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) out(i, j) = m(i, j).value();
  return out;
}

}  // namespace

ElementOutput evaluate_consistent_spin(const KirchhoffElement& e, const TanDofs<double>& x0,
                                       const TanRefs& refs, const EvalContext& ctx) {
  VecKT<D2> inc;
  for (int i = 0; i < kKirchhoffDofs; ++i) {
    inc(i).value() = D1(0.0, VecK::Unit(i));
    inc(i).derivatives() = GradK::Unit(i);
  }
  const TanDofs<D2> x = perturbed<D2>(x0, inc);
  const NodalKin<D2> n = e.nodal(x, refs);
  const auto& gps = e.gauss_points();

  D2 pi(D1(0.0));
  pi.derivatives() = GradK::Zero();
  std::vector<PointKin<D2>> points;
  for (int g = 0; g < static_cast<int>(gps.size()); ++g) {
    points.push_back(e.point(x, n, gps[g], g));
    const D2 eps = e.eps_bar(n, points.back(), gps[g]);
    pi += gps[g].weight * gps[g].J * e.energy_density(points.back(), eps, g);
  }

  // Maps (dt, dTheta_1) increments onto the additive (dt, dphi) ones.
  Eigen::Matrix<D1, kKirchhoffDofs, kKirchhoffDofs> m =
      Eigen::Matrix<D1, kKirchhoffDofs, kKirchhoffDofs>::Identity();
  const Vec3<D1> t1 = values_d1(x.t1), t2 = values_d1(x.t2), r1_mid = values_d1(n.r1_mid);
  m.block<1, 3>(6, 3) = -theta_m1_t_dual(t1, refs.ref1.col(0));
  m.block<1, 3>(13, 10) = -theta_m1_t_dual(t2, refs.ref2.col(0));
  m.row(14) -= theta_m1_t_dual(r1_mid, refs.ref3.col(0)) * e.collocation_point(2).V_r1.cast<D1>();

  GradK r_add = pi.derivatives();

  if (ctx.dynamics != nullptr && e.dynamic_points().active()) {
    const SectionProperties& sec = e.section();
    for (int g = 0; g < static_cast<int>(gps.size()); ++g) {
      const PointKin<D2>& k = points[g];
      const Mat3<D1> lambda = values_d1(k.lambda);
      const Vec3<D1> r = values_d1(k.r);
      Eigen::Matrix<D1, 3, kKirchhoffDofs> v_theta;
      for (int j = 0; j < kKirchhoffDofs; ++j) {
        Mat3<D1> dl;
        for (int c = 0; c < 3; ++c)
          for (int i = 0; i < 3; ++i) dl(i, c) = k.lambda(i, c).derivatives()(j);
        v_theta.col(j) = so3::axial<D1>(Mat3<D1>(dl * lambda.transpose()));
      }
      const PointRates<D1> rates = point_rates<D1>(*ctx.dynamics, e.dynamic_points().states[g], r, lambda);
      const Vec3<D1> f = sec.rhoA * rates.a;
      const Vec3<D1> m_in = inertia_moment<D1>(lambda, rates.W, rates.A, sec.C_rho());
      const double wj = gps[g].weight * gps[g].J;
      r_add += wj * (gps[g].V_r.cast<D1>().transpose() * f + v_theta.transpose() * m_in);
    }
  }

  const GradK res = m.transpose() * r_add;
  ElementOutput out;
  out.energy = pi.value().value();
  out.residual.resize(kKirchhoffDofs);
  out.stiffness.resize(kKirchhoffDofs, kKirchhoffDofs);
  for (int i = 0; i < kKirchhoffDofs; ++i) {
    out.residual(i) = res(i).value();
    out.stiffness.row(i) = res(i).derivatives().transpose();
  }
  return out;
}

}  // namespace gebeam::detail
