#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Geometry>
#include <Eigen/SparseCore>

#include "gebeam/element.hpp"

namespace gebeam {

// Load factor as a function of (pseudo-)time.
using LoadFactor = std::function<double(double)>;

// Dead spatial force and moment acting on a node.
struct PointLoad {
  int node = 0;
  Vector3d force = Vector3d::Zero();
  Vector3d moment = Vector3d::Zero();
  LoadFactor factor = [](double t) { return t; };
};

// Residual and stiffness of a point load on the DOFs of its node.
ElementOutput point_load_output(const Node& node, const Vector3d& force, const Vector3d& moment);

struct Reaction {
  Vector3d force = Vector3d::Zero();
  Vector3d moment = Vector3d::Zero();
};

struct SamplePoint {
  double s = 0.0;
  Vector3d r;
  Eigen::Quaterniond q;
};

struct AssembledSystem {
  Eigen::VectorXd residual;  // free DOFs only
  Eigen::SparseMatrix<double> stiffness;
  double energy = 0.0;
};

// Nodes, elements, constraints and loads of one beam problem. Copying a model
// copies the complete state, which the solver uses for step retries.
class Model {
 public:
  int add_node(const Node& node);
  int add_element(ElementPtr element);

  std::vector<Node>& nodes() { return nodes_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int id) const { return nodes_.at(id); }
  int element_count() const { return static_cast<int>(elements_.size()); }
  const Element& element(int id) const { return *elements_.at(id); }
  Element& element(int id) { return *elements_.at(id); }

  // Position and orientation held at their current values. Tangent-based ends
  // keep the tangent magnitude free.
  void clamp(int node);
  void fix_position(int node, std::array<bool, 3> mask = {true, true, true});
  void fix_rotation(int node);
  void fix_local(int node, int local_dof);
  // Holds the tangent magnitude of a Hermite end node; no effect on other layouts.
  void fix_tangent_length(int node);
  // Orientation (and optionally position) follow a prescribed history.
  void prescribe_triad(int node, std::function<Matrix3d(double)> triad_at);
  void prescribe_position(int node, std::function<Vector3d(double)> position_at);
  // Rigid joint: slave shares position and rotation increments of the master.
  void add_joint(int master, int slave);
  void add_load(PointLoad load);
  const std::vector<PointLoad>& loads() const { return loads_; }
  std::vector<PointLoad>& loads() { return loads_; }

  int dof_total() const;
  int dof_free() const;
  // (node, local DOF) of a free DOF index.
  std::pair<int, int> free_dof_location(int free_index) const;
  bool has_position_support() const;
  bool has_rotation_support() const;

  // Moves constrained DOFs to their prescribed values at `time`.
  void apply_prescribed(double time);
  AssembledSystem assemble(double time, const GenAlphaParams* dynamics, bool stiffness = true) const;
  // Applies an increment of the free DOFs.
  void update(const Eigen::VectorXd& increment);
  // Called after a converged step.
  void commit(const GenAlphaParams* dynamics);
  void init_dynamics();

  double internal_energy() const;
  Momenta momenta() const;
  // Support reactions (force and moment about the node) at a constrained node.
  Reaction reaction(int node, double time) const;
  // Applied loads at `time`: total force and moment about the origin.
  Reaction applied_resultant(double time) const;

  // Positions and triads at the element nodes ordered by arc length.
  std::vector<SamplePoint> samples() const;

 private:
  struct Prescribed {
    int node;
    std::function<Matrix3d(double)> triad;
    std::function<Vector3d(double)> position;
  };

  void build_dofs() const;
  int offset(int node) const;
  // Element-local output rotated into the constrained node bases.
  void to_node_bases(const std::vector<int>& element_nodes, ElementOutput& out) const;
  std::vector<int> element_dofs(const std::vector<int>& element_nodes) const;
  Eigen::VectorXd full_residual(double time) const;

  std::vector<Node> nodes_;
  std::vector<ElementHandle> elements_;
  std::vector<PointLoad> loads_;
  std::vector<Prescribed> prescribed_;
  std::vector<std::pair<int, int>> joints_;
  std::vector<std::pair<int, int>> fixed_;  // (node, local dof)
  std::vector<std::optional<Matrix3d>> tangent_basis_;  // per node, TanEnd only

  // Derived DOF numbering, rebuilt when the model changes.
  mutable bool dofs_valid_ = false;
  mutable std::vector<int> offsets_;
  mutable std::vector<int> canonical_;  // full index -> owner full index
  mutable std::vector<int> reduced_;    // full index -> free index or -1
  mutable int n_free_ = 0;
};

}  // namespace gebeam
