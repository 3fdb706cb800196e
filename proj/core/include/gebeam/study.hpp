#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gebeam/cases.hpp"
#include "gebeam/reference.hpp"

namespace gebeam {

enum class StepPolicy {
  Adaptive,  // start from the case's N0, halve on failure
  Constant,  // smallest robust constant step count
};

struct TracePoint {
  double time = 0.0;
  double kinetic = 0.0;
  double internal = 0.0;
};

// One solved case at a single mesh.
struct CaseRun {
  CaseSetup setup;  // model holds the final state
  SolveReport report;
  int n_steps_min = 0;  // Constant policy only
  std::vector<TracePoint> trace;
};

CaseRun run_case(const CaseOptions& options, StepPolicy policy = StepPolicy::Adaptive);

struct StudyOptions {
  CaseOptions base;  // base.n_elements is replaced by each mesh
  std::vector<int> meshes;
  StepPolicy steps = StepPolicy::Adaptive;
  std::optional<ArcWindow> window;
  int reference_factor = 4;  // numerical reference: WK-TAN on factor x finest mesh
  bool keep_solutions = false;
};

struct StudyRow {
  int n_ele = 0;
  int n_dof = 0;
  double l2_err = 0.0;  // NaN where undefined
  double energy_err = 0.0;
  double order_l2 = 0.0;
  double order_e = 0.0;
  int n_steps = 0;
  int n_iter_tot = 0;
  bool converged = false;
  std::string message;
  double energy = 0.0;
  Vector3d tip = Vector3d::Zero();
  std::optional<BalanceAudit> audit;
  std::vector<SamplePoint> solution;
  std::vector<TracePoint> trace;
};

struct StudyResult {
  std::string tag;
  std::string element;
  std::string locking;
  double zeta = 0.0;
  std::string reference;  // "analytic", "wk-tan/<n>" or "none"
  double u_max = 0.0;
  double energy_scale = 1.0;
  std::vector<StudyRow> rows;
};

StudyResult run_study(const StudyOptions& options);

// Relative L2 distance between the centerlines of two solutions of one case.
double solution_distance(const Model& a, const Model& b, double u_max, double length);

// case,element,locking,zeta,n_ele,n_dof,l2_err,energy_err,order_l2,order_e,n_steps,n_iter_tot
void write_csv(std::ostream& out, const StudyResult& result);
std::string summary_json(const StudyResult& result);
// s x y z q0 q1 q2 q3 per node.
void write_solution(std::ostream& out, const std::vector<SamplePoint>& points);
// time kinetic internal total.
void write_trace(std::ostream& out, const std::vector<TracePoint>& trace);

}  // namespace gebeam
