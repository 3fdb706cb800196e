#include "gebeam/so3.hpp"

namespace gebeam::so3 {

Eigen::RowVector3d theta_m1_t(const Vector3d& t, const Vector3d& g1_bar) {
  const double tn = t.norm();
  if (!(tn > 0.0)) throw DegenerateGeometry("tangent of zero length");
  const Vector3d g1 = t / tn;
  const double denom = 1.0 + g1.dot(g1_bar);
  if (!(denom > kTolSR)) throw SingularSR("tangent transform: antiparallel reference axis");
  return -(g1_bar.transpose() * skew(g1)) / (tn * denom);
}

TanTransforms tan_param_transforms(const Vector3d& t, const Vector3d& g1_bar) {
  const double tn = t.norm();
  if (!(tn > 0.0)) throw DegenerateGeometry("tangent of zero length");
  const Vector3d g1 = t / tn;
  const Matrix3d s = skew(g1);
  const Eigen::RowVector3d t_theta_t = theta_m1_t(t, g1_bar);

  TanTransforms out;
  out.T_tilde.setZero();
  out.T_tilde.topLeftCorner<3, 3>() = -tn * s;
  out.T_tilde.topRightCorner<3, 1>() = g1;
  out.T_tilde.bottomLeftCorner<1, 3>() = g1.transpose();

  out.T_tilde_inv.setZero();
  out.T_tilde_inv.topLeftCorner<3, 3>() = s / tn;
  out.T_tilde_inv.topRightCorner<3, 1>() = g1;
  out.T_tilde_inv.bottomLeftCorner<1, 3>() = g1.transpose();

  out.T_M = out.T_tilde;
  out.T_M.bottomLeftCorner<1, 3>() = (g1 + g1_bar).transpose() / (1.0 + g1.dot(g1_bar));

  out.T_M_inv = out.T_tilde_inv;
  out.T_M_inv.topLeftCorner<3, 3>() += g1 * t_theta_t;
  return out;
}

}  // namespace gebeam::so3
