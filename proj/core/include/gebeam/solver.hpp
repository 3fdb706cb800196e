#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "gebeam/model.hpp"

namespace gebeam {

struct SolverConfig {
  double tol_res = 1e-9;
  double tol_inc = 1e-8;
  int n_iter_max = 10;
  int n_steps0 = 1;
  bool adaptive = true;
  // Smallest admissible step as a fraction of the initial one.
  double min_step_ratio = 1.0 / 65536.0;
};

// Residual tolerance for a slenderness ratio: 1e-7 at 10 down to 1e-13 at 1e4.
double default_tol_res(double zeta);
SolverConfig default_config(double zeta);

struct NewtonResult {
  bool converged = false;
  int n_iter = 0;  // linear solves
  double res_norm = 0.0;
  double inc_norm = 0.0;
  std::string failure;
};

// Newton iteration at fixed (pseudo-)time. Prescribed values must already be applied.
NewtonResult newton_solve(Model& model, double time, const GenAlphaParams* dynamics,
                          const SolverConfig& config);

// Direct sparse solve. `model` only serves the diagnostic of a singular system.
Eigen::VectorXd linear_solve(const Eigen::SparseMatrix<double>& k, const Eigen::VectorXd& rhs,
                             const Model* model = nullptr);

struct StepStats {
  double t_begin = 0.0;
  double t_end = 0.0;
  bool converged = false;
  int n_iter = 0;
};

struct SolveReport {
  bool success = false;
  int n_steps = 0;     // converged steps
  int n_iter_tot = 0;  // failed steps count as n_iter_max
  std::vector<StepStats> steps;
  std::string message;
};

using StepObserver = std::function<void(double time, const Model& model)>;

// Quasi-static load stepping over pseudo-time [0, 1] with optional step adaption.
SolveReport solve_static(Model& model, const SolverConfig& config, const StepObserver& observer = {});

// Scripted iteration caps per attempted step, for testing the adaption logic.
SolveReport solve_static(Model& model, const SolverConfig& config,
                         const std::function<int(int attempt)>& iteration_cap,
                         const StepObserver& observer = {});

struct ConstantStepResult {
  SolveReport report;
  int n_steps_min = 0;
  Model solution;
};

// Smallest constant step count N (1..10, then in steps of 10) that converges
// and whose next refinement converges as well.
ConstantStepResult solve_constant_steps(const Model& initial, const SolverConfig& config,
                                        int n_max = 1000);

struct DynamicConfig {
  double dt = 0.1;
  double t_end = 1.0;
  double rho_inf = 1.0;
  SolverConfig newton;
  int max_halvings = 8;
};

// Implicit Lie-group generalized-alpha time stepping from rest.
SolveReport solve_dynamic(Model& model, const DynamicConfig& config, const StepObserver& observer = {});

}  // namespace gebeam
