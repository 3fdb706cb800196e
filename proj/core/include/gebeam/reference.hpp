#pragma once

#include <optional>

#include "gebeam/cases.hpp"
#include "gebeam/model.hpp"

namespace gebeam {

// Part of the beam, in initial arc length, over which an error is measured.
struct ArcWindow {
  double s_begin = 0.0;
  double s_end = 0.0;
};

// Current centerline of a discrete solution as a function of initial arc
// length. The returned callable owns a copy of the model state.
Centerline model_centerline(const Model& model);

// Largest distance between two centerlines over [0, length], sampled densely.
double max_displacement(const Centerline& deformed, const Centerline& initial, double length,
                        int samples = 4001);

// (1/u_max) sqrt((1/l) int |r_h - r_ref|^2 ds), with 10-point Gauss
// quadrature in arc length on every element. Throws if the discretized
// length deviates from `length` by more than 0.1%.
double l2_error(const Model& model, const Centerline& reference, double u_max, double length,
                const std::optional<ArcWindow>& window = std::nullopt);

double energy_error(double energy, double reference_energy);

// Convergence order between two successive meshes with sizes h1 > h2.
double observed_order(double e1, double e2, double h1, double h2);

struct BalanceAudit {
  Reaction support;  // transmitted to the support, moment about the origin
  Reaction applied;  // moment about the origin
  double force_gap = 0.0;
  double moment_gap = 0.0;
};

// Equilibrium of the support reactions at `clamp_node` against the applied loads.
BalanceAudit conservation_audit(const Model& model, int clamp_node, double time = 1.0);

}  // namespace gebeam
