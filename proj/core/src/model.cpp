#include "gebeam/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gebeam/errors.hpp"
#include "gebeam/so3.hpp"

namespace gebeam {

namespace {

// Local offset of the rotational block of a layout, -1 if there is none.
int rotation_offset(NodeLayout layout) {
  switch (layout) {
    case NodeLayout::RotEnd:
    case NodeLayout::Frame:
      return 3;
    case NodeLayout::HermiteFrame:
      return 6;
    case NodeLayout::TriadOnly:
      return 0;
    default:
      return -1;
  }
}

[[noreturn]] void rethrow_annotated(int element, const Error& e) {
  const std::string msg = "element " + std::to_string(element) + ": " + e.what();
  if (dynamic_cast<const SingularSR*>(&e)) throw SingularSR(msg);
  if (dynamic_cast<const RotationRangeError*>(&e)) throw RotationRangeError(msg);
  if (dynamic_cast<const DegenerateGeometry*>(&e)) throw DegenerateGeometry(msg);
  if (dynamic_cast<const Unsupported*>(&e)) throw Unsupported(msg);
  throw Error(msg);
}

}  // namespace

int Model::add_node(const Node& node) {
  nodes_.push_back(node);
  tangent_basis_.emplace_back();
  dofs_valid_ = false;
  return static_cast<int>(nodes_.size()) - 1;
}

int Model::add_element(ElementPtr element) {
  double s = 0.0;
  for (const auto& e : elements_) s = std::max(s, e->s_start() + e->length());
  element->set_s_start(s);
  element->set_id(static_cast<int>(elements_.size()));
  elements_.emplace_back(std::move(element));
  dofs_valid_ = false;
  return static_cast<int>(elements_.size()) - 1;
}

void Model::fix_local(int node, int local_dof) {
  if (local_dof < 0 || local_dof >= dof_count(nodes_.at(node).layout))
    throw Error("fix_local: DOF index out of range");
  fixed_.emplace_back(node, local_dof);
  dofs_valid_ = false;
}

void Model::fix_position(int node, std::array<bool, 3> mask) {
  if (!nodes_.at(node).has_position()) throw Error("fix_position: node has no position DOFs");
  for (int k = 0; k < 3; ++k)
    if (mask[k]) fix_local(node, k);
}

void Model::fix_rotation(int node) {
  Node& n = nodes_.at(node);
  switch (n.layout) {
    case NodeLayout::TanEnd:
      // Tangent direction and twist angle; the basis puts the tangent on the first axis.
      tangent_basis_[node] = n.current_triad();
      fix_local(node, 4);
      fix_local(node, 5);
      fix_local(node, 6);
      break;
    case NodeLayout::AngleOnly:
      fix_local(node, 0);
      break;
    default: {
      const int o = rotation_offset(n.layout);
      for (int k = 0; k < 3; ++k) fix_local(node, o + k);
    }
  }
}

void Model::clamp(int node) {
  fix_position(node);
  fix_rotation(node);
}

void Model::fix_tangent_length(int node) {
  const Node& n = nodes_.at(node);
  if (n.layout == NodeLayout::TanEnd) {
    if (!tangent_basis_[node]) throw Error("tangent length: fix the rotation of the node first");
    fix_local(node, 3);
  } else if (n.layout == NodeLayout::RotEnd) {
    fix_local(node, 6);
  }
}

void Model::prescribe_triad(int node, std::function<Matrix3d(double)> triad_at) {
  fix_rotation(node);
  prescribed_.push_back({node, std::move(triad_at), nullptr});
}

void Model::prescribe_position(int node, std::function<Vector3d(double)> position_at) {
  fix_position(node);
  prescribed_.push_back({node, nullptr, std::move(position_at)});
}

void Model::add_joint(int master, int slave) {
  const NodeLayout a = nodes_.at(master).layout, b = nodes_.at(slave).layout;
  if (rotation_offset(a) < 0 || rotation_offset(b) < 0 || !nodes_[master].has_position() ||
      !nodes_[slave].has_position())
    throw Unsupported("rigid joints need position and rotation DOFs on both nodes");
  if ((nodes_[master].d - nodes_[slave].d).norm() > 1e-12 * (1.0 + nodes_[master].d.norm()))
    throw Error("rigid joint: nodes are not coincident");
  joints_.emplace_back(master, slave);
  dofs_valid_ = false;
}

void Model::add_load(PointLoad load) {
  nodes_.at(load.node);
  loads_.push_back(std::move(load));
}

void Model::build_dofs() const {
  if (dofs_valid_) return;
  offsets_.assign(nodes_.size() + 1, 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) offsets_[i + 1] = offsets_[i] + dof_count(nodes_[i].layout);
  const int total = offsets_.back();
  canonical_.resize(total);
  for (int i = 0; i < total; ++i) canonical_[i] = i;
  for (auto [master, slave] : joints_) {
    const int om = offsets_[master], os = offsets_[slave];
    const int rm = rotation_offset(nodes_[master].layout), rs = rotation_offset(nodes_[slave].layout);
    for (int k = 0; k < 3; ++k) {
      canonical_[os + k] = canonical_[om + k];
      canonical_[os + rs + k] = canonical_[om + rm + k];
    }
  }
  std::vector<bool> fixed(total, false);
  for (auto [node, local] : fixed_) fixed[canonical_[offsets_[node] + local]] = true;
  reduced_.assign(total, -1);
  n_free_ = 0;
  for (int i = 0; i < total; ++i)
    if (canonical_[i] == i && !fixed[i]) reduced_[i] = n_free_++;
  for (int i = 0; i < total; ++i) reduced_[i] = reduced_[canonical_[i]];
  dofs_valid_ = true;
}

int Model::offset(int node) const {
  build_dofs();
  return offsets_[node];
}

int Model::dof_total() const {
  build_dofs();
  int n = 0;
  for (int i = 0; i < offsets_.back(); ++i) n += canonical_[i] == i;
  return n;
}

std::pair<int, int> Model::free_dof_location(int free_index) const {
  build_dofs();
  for (std::size_t n = 0; n < nodes_.size(); ++n)
    for (int k = 0; k < dof_count(nodes_[n].layout); ++k)
      if (reduced_[offsets_[n] + k] == free_index) return {static_cast<int>(n), k};
  throw Error("free DOF index out of range");
}

int Model::dof_free() const {
  build_dofs();
  return n_free_;
}

bool Model::has_position_support() const {
  for (auto [node, local] : fixed_)
    if (nodes_[node].has_position() && local < 3) return true;
  return false;
}

bool Model::has_rotation_support() const {
  for (auto [node, local] : fixed_)
    if (!nodes_[node].has_position() || local >= 3) return true;
  return false;
}

std::vector<int> Model::element_dofs(const std::vector<int>& element_nodes) const {
  build_dofs();
  std::vector<int> dofs;
  for (int n : element_nodes)
    for (int k = 0; k < dof_count(nodes_[n].layout); ++k) dofs.push_back(offsets_[n] + k);
  return dofs;
}

void Model::to_node_bases(const std::vector<int>& element_nodes, ElementOutput& out) const {
  int o = 0;
  for (int n : element_nodes) {
    if (tangent_basis_[n]) {
      const Matrix3d& p = *tangent_basis_[n];
      out.residual.segment<3>(o + 3) = p.transpose() * out.residual.segment<3>(o + 3).eval();
      if (out.stiffness.size() > 0) {
        out.stiffness.middleRows<3>(o + 3) = p.transpose() * out.stiffness.middleRows<3>(o + 3).eval();
        out.stiffness.middleCols<3>(o + 3) = out.stiffness.middleCols<3>(o + 3).eval() * p;
      }
    }
    o += dof_count(nodes_[n].layout);
  }
}

void Model::apply_prescribed(double time) {
  for (const auto& p : prescribed_) {
    Node& n = nodes_[p.node];
    if (p.position) n.d = p.position(time);
    if (!p.triad) continue;
    const Matrix3d target = p.triad(time);
    if (n.layout == NodeLayout::TanEnd) {
      const Vector3d g1 = target.col(0);
      n.t = n.t.norm() * g1;
      const Matrix3d m = so3::smallest_rotation<double>(n.ref_triad, g1);
      // Keep the angle continuous across steps; it may leave (-pi, pi].
      const double wrapped = so3::relative_angle<double>(target, m);
      n.phi += std::remainder(wrapped - n.phi, 2.0 * M_PI);
      tangent_basis_[p.node] = target;
    } else {
      n.triad = target;
    }
  }
  // Jointed slaves follow their masters.
  for (auto [master, slave] : joints_) nodes_[slave].d = nodes_[master].d;
}

AssembledSystem Model::assemble(double time, const GenAlphaParams* dynamics, bool stiffness) const {
  build_dofs();
  AssembledSystem sys;
  sys.residual = Eigen::VectorXd::Zero(n_free_);
  std::vector<Eigen::Triplet<double>> triplets;
  const EvalContext ctx{time, dynamics, stiffness};

  auto scatter = [&](const std::vector<int>& element_nodes, ElementOutput& out) {
    to_node_bases(element_nodes, out);
    const std::vector<int> dofs = element_dofs(element_nodes);
    std::vector<int> rows(dofs.size());
    for (std::size_t i = 0; i < dofs.size(); ++i) rows[i] = reduced_[dofs[i]];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i] < 0) continue;
      sys.residual(rows[i]) += out.residual(i);
      if (!stiffness) continue;
      for (std::size_t j = 0; j < rows.size(); ++j)
        if (rows[j] >= 0 && out.stiffness(i, j) != 0.0)
          triplets.emplace_back(rows[i], rows[j], out.stiffness(i, j));
    }
  };

  for (const auto& e : elements_) {
    ElementOutput out;
    try {
      out = e->evaluate(nodes_, ctx);
    } catch (const Error& ex) {
      rethrow_annotated(e->id(), ex);
    }
    sys.energy += out.energy;
    scatter(e->nodes(), out);
  }
  for (const auto& load : loads_) {
    const double f = load.factor(time);
    ElementOutput out = point_load_output(nodes_[load.node], f * load.force, f * load.moment);
    if (!stiffness) out.stiffness.resize(0, 0);
    scatter({load.node}, out);
  }
  if (stiffness) {
    sys.stiffness.resize(n_free_, n_free_);
    sys.stiffness.setFromTriplets(triplets.begin(), triplets.end());
  }
  return sys;
}

Eigen::VectorXd Model::full_residual(double time) const {
  build_dofs();
  Eigen::VectorXd r = Eigen::VectorXd::Zero(offsets_.back());
  const EvalContext ctx{time, nullptr, false};
  auto scatter = [&](const std::vector<int>& element_nodes, const ElementOutput& out) {
    const std::vector<int> dofs = element_dofs(element_nodes);
    for (std::size_t i = 0; i < dofs.size(); ++i) r(dofs[i]) += out.residual(i);
  };
  for (const auto& e : elements_) scatter(e->nodes(), e->evaluate(nodes_, ctx));
  for (const auto& load : loads_) {
    const double f = load.factor(time);
    scatter({load.node}, point_load_output(nodes_[load.node], f * load.force, f * load.moment));
  }
  return r;
}

void Model::update(const Eigen::VectorXd& increment) {
  build_dofs();
  if (increment.size() != n_free_) throw Error("update: increment size mismatch");
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    const int count = dof_count(nodes_[n].layout);
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(count);
    for (int k = 0; k < count; ++k) {
      const int row = reduced_[offsets_[n] + k];
      if (row >= 0) delta(k) = increment(row);
    }
    if (tangent_basis_[n]) delta.segment<3>(3) = (*tangent_basis_[n] * delta.segment<3>(3)).eval();
    nodes_[n].apply_increment(delta.data());
  }
}

void Model::commit(const GenAlphaParams* dynamics) {
  const EvalContext ctx{0.0, dynamics, false};
  for (auto& e : elements_) e->commit(nodes_, ctx);
  for (auto& n : nodes_) n.refresh_reference();
}

void Model::init_dynamics() {
  for (auto& e : elements_) e->init_dynamics(nodes_);
}

double Model::internal_energy() const {
  double energy = 0.0;
  const EvalContext ctx{0.0, nullptr, false};
  for (const auto& e : elements_) energy += e->evaluate(nodes_, ctx).energy;
  return energy;
}

Momenta Model::momenta() const {
  Momenta total;
  for (const auto& e : elements_) {
    const Momenta m = e->momenta();
    total.linear += m.linear;
    total.angular += m.angular;
    total.kinetic += m.kinetic;
  }
  return total;
}

Reaction Model::reaction(int node, double time) const {
  const Eigen::VectorXd r = full_residual(time);
  const Node& n = nodes_.at(node);
  const int o = offset(node);
  Reaction out;
  if (n.has_position()) out.force = r.segment<3>(o);
  switch (n.layout) {
    case NodeLayout::TanEnd: {
      const Vector3d g1 = n.t.normalized();
      out.moment = r(o + 6) * g1 + n.t.cross(Vector3d(r.segment<3>(o + 3)));
      break;
    }
    case NodeLayout::AngleOnly:
      break;
    default:
      out.moment = r.segment<3>(o + rotation_offset(n.layout));
  }
  return out;
}

Reaction Model::applied_resultant(double time) const {
  Reaction out;
  for (const auto& load : loads_) {
    const double f = load.factor(time);
    const Node& n = nodes_[load.node];
    out.force += f * load.force;
    out.moment += f * (load.moment + (n.has_position() ? n.d.cross(load.force) : Vector3d::Zero()));
  }
  return out;
}

std::vector<SamplePoint> Model::samples() const {
  std::vector<const Element*> order;
  for (const auto& e : elements_) order.push_back(&*e);
  std::stable_sort(order.begin(), order.end(),
                   [](const Element* a, const Element* b) { return a->s_start() < b->s_start(); });
  std::vector<SamplePoint> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Element& e = *order[i];
    const int m = static_cast<int>(e.nodes().size()) - 1;
    for (int k = (i == 0 ? 0 : 1); k <= m; ++k) {
      const double xi = -1.0 + 2.0 * k / m;
      SamplePoint p;
      p.s = e.arc_length(xi);
      p.r = e.position(nodes_, xi);
      p.q = Eigen::Quaterniond(e.triad(nodes_, xi));
      if (p.q.w() < 0.0) p.q.coeffs() *= -1.0;
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace gebeam
