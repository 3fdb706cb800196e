#include <algorithm>
#include <cmath>
#include <map>

#include "gebeam/element.hpp"
#include "gebeam/errors.hpp"
#include "gebeam/interp.hpp"
#include "gebeam/so3.hpp"

namespace gebeam {

int dof_count(NodeLayout layout) {
  switch (layout) {
    case NodeLayout::TanEnd:
    case NodeLayout::RotEnd:
      return 7;
    case NodeLayout::AngleOnly:
      return 1;
    case NodeLayout::Frame:
      return 6;
    case NodeLayout::HermiteFrame:
      return 9;
    case NodeLayout::TriadOnly:
      return 3;
  }
  return 0;
}

const char* to_string(NodeLayout layout) {
  switch (layout) {
    case NodeLayout::TanEnd: return "tan-end";
    case NodeLayout::RotEnd: return "rot-end";
    case NodeLayout::AngleOnly: return "angle";
    case NodeLayout::Frame: return "frame";
    case NodeLayout::HermiteFrame: return "hermite-frame";
    case NodeLayout::TriadOnly: return "triad";
  }
  return "?";
}

bool Node::has_position() const {
  return layout != NodeLayout::AngleOnly && layout != NodeLayout::TriadOnly;
}

Matrix3d Node::current_triad() const {
  if (layout == NodeLayout::TanEnd) return so3::triad_from_tangent<double>(ref_triad, t, phi);
  return triad;
}

Vector3d Node::tangent() const {
  switch (layout) {
    case NodeLayout::TanEnd:
    case NodeLayout::HermiteFrame:
      return t;
    case NodeLayout::RotEnd:
      return tmag * triad.col(0);
    default:
      return triad.col(0);
  }
}

void Node::apply_increment(const double* delta) {
  auto vec = [&](int offset) { return Vector3d(delta[offset], delta[offset + 1], delta[offset + 2]); };
  auto rotate = [&](int offset) { triad = so3::exp_map<double>(vec(offset)) * triad; };
  switch (layout) {
    case NodeLayout::TanEnd:
      d += vec(0);
      t += vec(3);
      phi += delta[6];
      break;
    case NodeLayout::RotEnd:
      d += vec(0);
      rotate(3);
      tmag += delta[6];
      break;
    case NodeLayout::AngleOnly:
      phi += delta[0];
      break;
    case NodeLayout::Frame:
      d += vec(0);
      rotate(3);
      break;
    case NodeLayout::HermiteFrame:
      d += vec(0);
      t += vec(3);
      rotate(6);
      break;
    case NodeLayout::TriadOnly:
      rotate(0);
      break;
  }
}

void Node::refresh_reference() {
  if (layout == NodeLayout::TanEnd) ref_triad = so3::smallest_rotation<double>(ref_triad, t.normalized());
}

const char* to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::CJ: return "cj";
    case ElementKind::HSR: return "hsr";
    case ElementKind::SkTan: return "sk-tan";
    case ElementKind::SkTanCS: return "sk-tan-cs";
    case ElementKind::SkRot: return "sk-rot";
    case ElementKind::SkRotCS: return "sk-rot-cs";
    case ElementKind::WkTan: return "wk-tan";
    case ElementKind::WkRot: return "wk-rot";
    case ElementKind::SkNonObjective: return "sk-sr-time";
  }
  return "?";
}

const char* to_string(Locking locking) {
  switch (locking) {
    case Locking::MCS: return "mcs";
    case Locking::FI: return "fi";
    case Locking::RI: return "ri";
  }
  return "?";
}

ElementKind element_kind_from_string(const std::string& name) {
  static const std::map<std::string, ElementKind> table{
      {"cj", ElementKind::CJ},           {"hsr", ElementKind::HSR},
      {"sk-tan", ElementKind::SkTan},    {"sk-tan-cs", ElementKind::SkTanCS},
      {"sk-rot", ElementKind::SkRot},    {"sk-rot-cs", ElementKind::SkRotCS},
      {"wk-tan", ElementKind::WkTan},    {"wk-rot", ElementKind::WkRot},
      {"sk-sr-time", ElementKind::SkNonObjective}};
  auto it = table.find(name);
  if (it == table.end()) throw Unsupported("unknown element type '" + name + "'");
  return it->second;
}

Locking locking_from_string(const std::string& name) {
  if (name == "mcs") return Locking::MCS;
  if (name == "fi") return Locking::FI;
  if (name == "ri") return Locking::RI;
  if (name == "ans") throw Unsupported("locking policy 'ans' is not supported");
  throw Unsupported("unknown locking policy '" + name + "'");
}

bool is_kirchhoff(ElementKind kind) {
  return kind != ElementKind::CJ && kind != ElementKind::HSR;
}

bool uses_rot_layout(ElementKind kind) {
  return kind == ElementKind::SkRot || kind == ElementKind::SkRotCS || kind == ElementKind::WkRot;
}

double Element::arc_length(double xi) const {
  const GaussRule& g = gauss_legendre(10);
  const double half = 0.5 * (xi + 1.0);
  double s = 0.0;
  for (int k = 0; k < g.size(); ++k) s += g.weights[k] * half * jacobian(-1.0 + half * (g.points[k] + 1.0));
  return s_start_ + s;
}

double Element::xi_at(double s) const {
  double xi = -1.0 + 2.0 * (s - s_start_) / length();
  for (int iter = 0; iter < 50; ++iter) {
    const double dxi = (arc_length(xi) - s) / jacobian(xi);
    xi -= dxi;
    if (std::abs(dxi) < 1e-14) break;
  }
  return std::clamp(xi, -1.0, 1.0);
}

Eigen::MatrixXd fd_stiffness(const Element& element, const std::vector<Node>& nodes,
                             const EvalContext& ctx, double step) {
  EvalContext plain = ctx;
  plain.stiffness = false;
  std::vector<std::pair<int, int>> dofs;  // (node, local dof)
  for (int n : element.nodes())
    for (int k = 0; k < dof_count(nodes[n].layout); ++k) dofs.emplace_back(n, k);
  const int size = static_cast<int>(dofs.size());
  Eigen::MatrixXd k(size, size);
  for (int j = 0; j < size; ++j) {
    auto [n, local] = dofs[j];
    std::vector<double> delta(dof_count(nodes[n].layout), 0.0);
    std::vector<Node> plus = nodes, minus = nodes;
    delta[local] = step;
    plus[n].apply_increment(delta.data());
    delta[local] = -step;
    minus[n].apply_increment(delta.data());
    k.col(j) = (element.evaluate(plus, plain).residual - element.evaluate(minus, plain).residual) /
               (2.0 * step);
  }
  return k;
}

ElementOutput rot_transform(const ElementOutput& tan, const std::array<Vector3d, 2>& tangents) {
  const int n = static_cast<int>(tan.residual.size());
  Eigen::MatrixXd t_tilde = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int b = 0; b < 2; ++b) {
    const int o = 7 * b;
    const double tn = tangents[b].norm();
    if (!(tn > 0.0)) throw DegenerateGeometry("rot transform: zero tangent magnitude");
    const Vector3d g1 = tangents[b] / tn;
    const Matrix3d s = so3::skew(g1);
    t_tilde.block<4, 4>(o + 3, o + 3).setZero();
    t_tilde.block<3, 3>(o + 3, o + 3) = -tn * s;
    t_tilde.block<3, 1>(o + 3, o + 6) = g1;
    t_tilde.block<1, 3>(o + 6, o + 3) = g1.transpose();

    const Vector3d r_t = tan.residual.segment<3>(o + 3);
    const double r_theta = tan.residual(o + 6);
    h.block<3, 3>(o + 3, o + 3) = tn * so3::skew(r_t) * s - r_theta * s;
    h.block<3, 1>(o + 3, o + 6) = s * r_t;
    h.block<1, 3>(o + 6, o + 3) = -r_t.transpose() * s;
  }
  ElementOutput out;
  out.energy = tan.energy;
  out.residual = t_tilde.transpose() * tan.residual;
  if (tan.stiffness.size() > 0) out.stiffness = h + t_tilde.transpose() * tan.stiffness * t_tilde;
  return out;
}

}  // namespace gebeam
