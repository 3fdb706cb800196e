#pragma once

#include <Eigen/Core>

#include "gebeam/scalar.hpp"

namespace gebeam {

// Primary variables carried by a node, in local DOF order:
//   TanEnd       d(3) t(3) phi(1)
//   RotEnd       d(3) theta(3) |t|(1)
//   AngleOnly    phi(1)
//   Frame        d(3) theta(3)
//   HermiteFrame d(3) t(3) theta(3)
//   TriadOnly    theta(3)
// theta components are multiplicative (spatial spin) increments.
enum class NodeLayout { TanEnd, RotEnd, AngleOnly, Frame, HermiteFrame, TriadOnly };

int dof_count(NodeLayout layout);
const char* to_string(NodeLayout layout);

struct Node {
  NodeLayout layout = NodeLayout::Frame;
  Vector3d d = Vector3d::Zero();
  Vector3d t = Vector3d::UnitX();
  double phi = 0.0;
  double tmag = 1.0;
  // Current triad for layouts with rotational DOFs.
  Matrix3d triad = Matrix3d::Identity();
  // Smallest-rotation reference of the last converged step (TanEnd, AngleOnly).
  Matrix3d ref_triad = Matrix3d::Identity();
  // Arc-length coordinate in the initial configuration.
  double s = 0.0;

  bool has_position() const;
  // Current triad of a TanEnd node; the triad member otherwise.
  Matrix3d current_triad() const;
  Vector3d tangent() const;

  void apply_increment(const double* delta);
  // Re-bases the smallest-rotation reference at the current tangent.
  void refresh_reference();
};

}  // namespace gebeam
