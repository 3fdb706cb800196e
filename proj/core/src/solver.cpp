#include "gebeam/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseLU>

#include "gebeam/errors.hpp"

namespace gebeam {

double default_tol_res(double zeta) {
  const double e = std::clamp(std::round(std::log10(zeta)), 1.0, 4.0);
  return std::pow(10.0, -5.0 - 2.0 * e);
}

SolverConfig default_config(double zeta) {
  SolverConfig c;
  c.tol_res = default_tol_res(zeta);
  return c;
}

namespace {

std::string null_mode_hint(const Model* model) {
  if (model == nullptr) return "";
  if (!model->has_position_support()) return "; unsupported rigid-body translation";
  if (!model->has_rotation_support()) return "; possible unsupported rigid-body rotation";
  return "";
}

std::string dof_name(const Model* model, Eigen::Index index) {
  if (model == nullptr) return "free DOF " + std::to_string(index);
  const auto [node, local] = model->free_dof_location(static_cast<int>(index));
  return "node " + std::to_string(node) + " local DOF " + std::to_string(local);
}

}  // namespace

Eigen::VectorXd linear_solve(const Eigen::SparseMatrix<double>& k, const Eigen::VectorXd& rhs,
                             const Model* model) {
  if (k.rows() != k.cols() || k.rows() != rhs.size()) throw Error("linear solve: dimension mismatch");
  if (k.rows() == 0) return {};
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(k);
  lu.factorize(k);
  if (lu.info() != Eigen::Success)
    throw SingularSystem("singular stiffness matrix (" + lu.lastErrorMessage() + ")" + null_mode_hint(model));
  Eigen::VectorXd x = lu.solve(rhs);
  // One refinement sweep for badly conditioned slender systems.
  Eigen::VectorXd r = rhs - k * x;
  if (r.norm() > 1e-10 * rhs.norm()) {
    x += lu.solve(r);
    r = rhs - k * x;
  }
  // A numerically singular matrix factorizes, but the solution no longer
  // satisfies the system. The largest solution entry points at the null mode.
  if (!x.allFinite() || r.norm() > 1e-1 * rhs.norm()) {
    Eigen::Index worst = 0;
    if (x.allFinite()) x.cwiseAbs().maxCoeff(&worst);
    throw SingularSystem("numerically singular stiffness matrix, dominant at " + dof_name(model, worst) +
                         null_mode_hint(model));
  }
  return x;
}

NewtonResult newton_solve(Model& model, double time, const GenAlphaParams* dynamics,
                          const SolverConfig& config) {
  NewtonResult result;
  for (int it = 0;; ++it) {
    AssembledSystem sys;
    try {
      sys = model.assemble(time, dynamics, true);
    } catch (const Error& e) {
      result.failure = e.what();
      return result;
    }
    result.res_norm = sys.residual.norm();
    if (!std::isfinite(result.res_norm)) {
      result.failure = "non-finite residual";
      return result;
    }
    const bool small_res = result.res_norm < config.tol_res;
    if (small_res && (it == 0 || result.inc_norm < config.tol_inc)) {
      result.converged = true;
      return result;
    }
    if (it == config.n_iter_max) {
      result.failure = "no convergence within the iteration limit";
      return result;
    }
    Eigen::VectorXd dx;
    try {
      dx = linear_solve(sys.stiffness, -sys.residual, &model);
      model.update(dx);
    } catch (const Error& e) {
      result.failure = e.what();
      return result;
    }
    result.inc_norm = dx.norm();
    result.n_iter = it + 1;
  }
}

namespace {

// Shared step-size control of the static and dynamic drivers.
struct StepControl {
  double dt0;
  double dt;
  int streak = 0;

  explicit StepControl(double initial) : dt0(initial), dt(initial) {}

  double next(double t, double t_end) const {
    return t_end - t <= dt * (1.0 + 1e-9) ? t_end - t : dt;
  }
  void converged() {
    if (dt >= dt0) return;
    if (++streak == 4) {
      dt = std::min(2.0 * dt, dt0);
      streak = 0;
    }
  }
  void failed() {
    dt *= 0.5;
    streak = 0;
  }
};

SolveReport run_static(Model& model, const SolverConfig& config,
                       const std::function<int(int)>& iteration_cap, const StepObserver& observer) {
  if (config.n_steps0 < 1) throw Error("solver: at least one load step required");
  SolveReport report;
  StepControl control(1.0 / config.n_steps0);
  double t = 0.0;
  for (int attempt = 0; t < 1.0; ++attempt) {
    const double h = control.next(t, 1.0);
    const double t1 = (h == 1.0 - t) ? 1.0 : t + h;
    SolverConfig step_config = config;
    if (iteration_cap) step_config.n_iter_max = iteration_cap(attempt);
    Model backup = model;
    model.apply_prescribed(t1);
    const NewtonResult nr = newton_solve(model, t1, nullptr, step_config);
    StepStats stats{t, t1, nr.converged, nr.converged ? nr.n_iter : step_config.n_iter_max};
    report.steps.push_back(stats);
    report.n_iter_tot += stats.n_iter;
    if (nr.converged) {
      model.commit(nullptr);
      t = t1;
      ++report.n_steps;
      control.converged();
      if (observer) observer(t, model);
      continue;
    }
    model = std::move(backup);
    if (!config.adaptive) {
      report.message = "load step failed: " + nr.failure;
      return report;
    }
    control.failed();
    if (control.dt < control.dt0 * config.min_step_ratio) {
      report.message = "load step size underflow: " + nr.failure;
      return report;
    }
  }
  report.success = true;
  return report;
}

}  // namespace

SolveReport solve_static(Model& model, const SolverConfig& config, const StepObserver& observer) {
  return run_static(model, config, {}, observer);
}

SolveReport solve_static(Model& model, const SolverConfig& config,
                         const std::function<int(int)>& iteration_cap, const StepObserver& observer) {
  return run_static(model, config, iteration_cap, observer);
}

ConstantStepResult solve_constant_steps(const Model& initial, const SolverConfig& config, int n_max) {
  SolverConfig fixed = config;
  fixed.adaptive = false;
  auto attempt = [&](int n, Model& m) {
    m = initial;
    fixed.n_steps0 = n;
    return solve_static(m, fixed);
  };
  auto next_n = [](int n) { return n < 10 ? n + 1 : n + 10; };

  ConstantStepResult out{{}, 0, initial};
  Model trial = initial;
  for (int n = 1; n <= n_max; n = next_n(n)) {
    SolveReport report = attempt(n, trial);
    if (!report.success) continue;
    Model check = initial;
    if (!attempt(next_n(n), check).success) continue;
    out.report = std::move(report);
    out.n_steps_min = n;
    out.solution = std::move(trial);
    return out;
  }
  out.report.message = "no admissible constant step size found";
  return out;
}

SolveReport solve_dynamic(Model& model, const DynamicConfig& config, const StepObserver& observer) {
  if (!(config.dt > 0.0) || !(config.t_end > 0.0)) throw Error("dynamics: dt and t_end must be positive");
  SolveReport report;
  model.init_dynamics();
  if (observer) observer(0.0, model);
  StepControl control(config.dt);
  double t = 0.0;
  while (t < config.t_end) {
    const double h = control.next(t, config.t_end);
    const double t1 = (h == config.t_end - t) ? config.t_end : t + h;
    const GenAlphaParams params = derive_params(config.rho_inf, t1 - t);
    Model backup = model;
    model.apply_prescribed(t1);
    const NewtonResult nr = newton_solve(model, t1, &params, config.newton);
    StepStats stats{t, t1, nr.converged, nr.converged ? nr.n_iter : config.newton.n_iter_max};
    report.steps.push_back(stats);
    report.n_iter_tot += stats.n_iter;
    if (nr.converged) {
      model.commit(&params);
      t = t1;
      ++report.n_steps;
      control.converged();
      if (observer) observer(t, model);
      continue;
    }
    model = std::move(backup);
    control.failed();
    if (control.dt < config.dt * std::ldexp(1.0, -config.max_halvings)) {
      report.message = "time step failed: " + nr.failure;
      return report;
    }
  }
  report.success = true;
  return report;
}

}  // namespace gebeam
