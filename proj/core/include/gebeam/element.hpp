#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gebeam/node.hpp"
#include "gebeam/section.hpp"
#include "gebeam/timeint.hpp"

namespace gebeam {

enum class ElementKind { CJ, HSR, SkTan, SkTanCS, SkRot, SkRotCS, WkTan, WkRot, SkNonObjective };
enum class Locking { MCS, FI, RI };

const char* to_string(ElementKind kind);
const char* to_string(Locking locking);
ElementKind element_kind_from_string(const std::string& name);
Locking locking_from_string(const std::string& name);
bool is_kirchhoff(ElementKind kind);
bool uses_rot_layout(ElementKind kind);

struct EvalContext {
  double time = 0.0;
  const GenAlphaParams* dynamics = nullptr;  // null for statics
  bool stiffness = true;
};

struct ElementOutput {
  Eigen::VectorXd residual;
  Eigen::MatrixXd stiffness;
  double energy = 0.0;
};

struct Momenta {
  Vector3d linear = Vector3d::Zero();
  Vector3d angular = Vector3d::Zero();
  double kinetic = 0.0;
};

// Dynamic states at the inertia quadrature points of an element.
struct DynamicPoints {
  std::vector<PointDynState> states;
  bool active() const { return !states.empty(); }
};

class Element {
 public:
  virtual ~Element() = default;
  virtual std::unique_ptr<Element> clone() const = 0;

  virtual ElementKind kind() const = 0;
  const std::vector<int>& nodes() const { return nodes_; }
  int id() const { return id_; }
  void set_id(int id) { id_ = id; }

  virtual ElementOutput evaluate(const std::vector<Node>& nodes, const EvalContext& ctx) const = 0;

  // Called once after a converged step.
  virtual void commit(std::vector<Node>& nodes, const EvalContext& ctx) = 0;
  // Starts the dynamic history from the current configuration at rest.
  virtual void init_dynamics(const std::vector<Node>& nodes) = 0;
  virtual Momenta momenta() const { return {}; }

  // Post-processing on the current configuration.
  virtual Vector3d position(const std::vector<Node>& nodes, double xi) const = 0;
  virtual Matrix3d triad(const std::vector<Node>& nodes, double xi) const = 0;
  virtual Vector3d initial_position(double xi) const = 0;
  // ds/dxi of the initial geometry.
  virtual double jacobian(double xi) const = 0;
  virtual double length() const = 0;

  double s_start() const { return s_start_; }
  void set_s_start(double s) { s_start_ = s; }
  // Initial arc-length coordinate of xi.
  double arc_length(double xi) const;
  double xi_at(double s) const;

 protected:
  std::vector<int> nodes_;
  int id_ = 0;
  double s_start_ = 0.0;
};

using ElementPtr = std::unique_ptr<Element>;

// Value-semantic owner of a polymorphic element.
class ElementHandle {
 public:
  ElementHandle() = default;
  explicit ElementHandle(ElementPtr e) : ptr_(std::move(e)) {}
  ElementHandle(const ElementHandle& other) : ptr_(other.ptr_ ? other.ptr_->clone() : nullptr) {}
  ElementHandle(ElementHandle&&) noexcept = default;
  ElementHandle& operator=(const ElementHandle& other) {
    if (this != &other) ptr_ = other.ptr_ ? other.ptr_->clone() : nullptr;
    return *this;
  }
  ElementHandle& operator=(ElementHandle&&) noexcept = default;

  Element* operator->() { return ptr_.get(); }
  const Element* operator->() const { return ptr_.get(); }
  Element& operator*() { return *ptr_; }
  const Element& operator*() const { return *ptr_; }

 private:
  ElementPtr ptr_;
};

struct KirchhoffOptions {
  ElementKind kind = ElementKind::SkTan;
  Locking locking = Locking::MCS;
};

// Initial nodal data of a Hermite element: positions, unit tangents and triads
// at xi = -1, 1 and the triad near xi = 0.
struct HermiteElementGeometry {
  Vector3d d1, t1, d2, t2;
  Matrix3d triad1, triad2, triad_mid;
};

ElementPtr make_kirchhoff_element(const KirchhoffOptions& options, std::array<int, 3> nodes,
                                  const HermiteElementGeometry& geometry,
                                  const SectionProperties& section, std::vector<Node>& node_store);

ElementPtr make_hsr_element(std::array<int, 3> nodes, const HermiteElementGeometry& geometry,
                            const SectionProperties& section, std::vector<Node>& node_store);

// Lagrange element with nodes ordered -1, +1, interior ascending.
ElementPtr make_cj_element(std::vector<int> nodes, const SectionProperties& section,
                           Locking locking, const std::vector<Node>& node_store);

// Central-difference Jacobian of the residual with respect to nodal increments.
Eigen::MatrixXd fd_stiffness(const Element& element, const std::vector<Node>& nodes,
                             const EvalContext& ctx, double step);

// ROT-layout quantities from a TAN-layout evaluation that used the current
// nodal triads as references.
ElementOutput rot_transform(const ElementOutput& tan, const std::array<Vector3d, 2>& tangents);

}  // namespace gebeam
