#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gebeam/model.hpp"
#include "gebeam/solver.hpp"

namespace gebeam {

using Centerline = std::function<Vector3d(double s)>;

// Stress-free geometry parametrized by arc length.
struct InitialCurve {
  Centerline position;
  Centerline tangent;  // unit
  std::function<Matrix3d(double s)> triad;
  double length = 0.0;
};

struct ElementSpec {
  ElementKind kind = ElementKind::SkTan;
  Locking locking = Locking::MCS;
  int cj_nodes = 4;  // Lagrange nodes per CJ element
};

struct BeamMesh {
  std::vector<int> elements;
  int first_node = -1;
  int last_node = -1;
};

// Appends a uniformly meshed beam along `curve` to the model.
BeamMesh add_beam(Model& model, const InitialCurve& curve, int n_elements, const ElementSpec& spec,
                  const SectionProperties& section);

enum class LoadPath { Simultaneous, Successive };

struct CaseOptions {
  std::string tag;
  ElementSpec element;
  double zeta = 0.0;   // 0: case default
  int n_elements = 0;  // 0: case default (per leg for the elbow)
  int n_steps0 = 0;    // 0: case default
  LoadPath path = LoadPath::Simultaneous;
  double dt = 0.0;       // dynamics only, 0: default
  double rho_inf = -1.0;  // dynamics only, < 0: default
  double t_end = 0.0;     // dynamics only, 0: default
  // Also hold the tangent magnitude at the clamp (Hermite elements). Unset: case default.
  std::optional<bool> clamp_tangent_length;
};

struct CaseSetup {
  std::string tag;
  Model model;
  InitialCurve initial;
  double zeta = 0.0;
  int clamp_node = -1;
  int tip_node = -1;
  // Closed-form deformed centerline and stored energy, when known.
  Centerline reference;
  std::optional<double> reference_energy;
  // Energy normalization of the rigid-rotation case.
  double energy_scale = 1.0;
  SolverConfig solver;
  bool dynamic = false;
  DynamicConfig dynamics;
};

const std::vector<std::string>& case_tags();
int default_elements(const std::string& tag);
double default_zeta(const std::string& tag);
bool default_clamp_tangent_length(const std::string& tag);
CaseSetup build_case(const CaseOptions& options);

// Initial geometry of the helix with linearly increasing slope (4.5 loops).
double slope_helix_radius(double length = 1000.0);
InitialCurve slope_helix_curve(double length = 1000.0, double twist_per_loop = 0.0);

// Closed-form deformed centerlines.
Centerline circle_arc(double radius);           // in the x-y plane, tangent e1 at s = 0
Centerline bent_helix(double radius);           // straight beam under end moment (M, 0, M)

}  // namespace gebeam
