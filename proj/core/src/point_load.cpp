#include "gebeam/errors.hpp"
#include "gebeam/model.hpp"
#include "gebeam/so3.hpp"

namespace gebeam {

ElementOutput point_load_output(const Node& node, const Vector3d& force, const Vector3d& moment) {
  const int n = dof_count(node.layout);
  ElementOutput out;
  out.residual = Eigen::VectorXd::Zero(n);
  out.stiffness = Eigen::MatrixXd::Zero(n, n);
  switch (node.layout) {
    case NodeLayout::TanEnd: {
      // delta theta = g1 dTheta1 + t x dt / |t|^2
      const Vector3d& t = node.t;
      const double t2 = t.squaredNorm();
      const Vector3d g1 = t / std::sqrt(t2);
      const Vector3d m_x_t = moment.cross(t);
      out.residual.segment<3>(0) = -force;
      out.residual.segment<3>(3) = -m_x_t / t2;
      out.residual(6) = -g1.dot(moment);
      out.stiffness.block<3, 3>(3, 3) = -so3::skew<double>(moment) / t2 + 2.0 * m_x_t * t.transpose() / (t2 * t2);
      out.stiffness.block<1, 3>(6, 3) = -(moment - g1 * g1.dot(moment)).transpose() / std::sqrt(t2);
      break;
    }
    case NodeLayout::RotEnd:
    case NodeLayout::Frame:
      out.residual.segment<3>(0) = -force;
      out.residual.segment<3>(3) = -moment;
      break;
    case NodeLayout::HermiteFrame:
      out.residual.segment<3>(0) = -force;
      out.residual.segment<3>(6) = -moment;
      break;
    case NodeLayout::TriadOnly:
      if (force.squaredNorm() > 0.0) throw Unsupported("point load: force on a node without position");
      out.residual = -moment;
      break;
    case NodeLayout::AngleOnly:
      throw Unsupported("point load on an angle-only node");
  }
  return out;
}

}  // namespace gebeam
