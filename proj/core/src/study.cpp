#include "gebeam/study.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "gebeam/errors.hpp"

namespace gebeam {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TracePoint trace_point(double t, const Model& m) {
  return {t, m.momenta().kinetic, m.internal_energy()};
}

struct Reference {
  std::string label = "none";
  Centerline curve;
  std::optional<double> energy;
  double u_max = 0.0;
};

Reference make_reference(const StudyOptions& o, const CaseSetup& probe) {
  Reference ref;
  if (probe.dynamic || o.base.tag == "objectivity-quartercircle") return ref;
  if (probe.reference) {
    ref.label = "analytic";
    ref.curve = probe.reference;
    ref.energy = probe.reference_energy;
  } else {
    CaseOptions fine = o.base;
    fine.element = ElementSpec{ElementKind::WkTan, Locking::MCS};
    fine.n_elements = o.reference_factor * *std::max_element(o.meshes.begin(), o.meshes.end());
    CaseRun run = run_case(fine);
    if (!run.report.success) throw NoConvergence("reference solution failed: " + run.report.message);
    ref.label = fmt::format("wk-tan/{}", fine.n_elements);
    ref.curve = model_centerline(run.setup.model);
    ref.energy = run.setup.model.internal_energy();
  }
  ref.u_max = max_displacement(ref.curve, probe.initial.position, probe.initial.length);
  return ref;
}

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::json vec_json(const Vector3d& v) { return {v.x(), v.y(), v.z()}; }

std::string csv_number(double v) { return std::isfinite(v) ? fmt::format("{:.10e}", v) : "nan"; }

}  // namespace

CaseRun run_case(const CaseOptions& options, StepPolicy policy) {
  CaseRun run{build_case(options), {}, 0, {}};
  CaseSetup& c = run.setup;
  const bool traced = c.dynamic || c.tag == "objectivity-quartercircle";
  StepObserver observer;
  if (traced) observer = [&](double t, const Model& m) { run.trace.push_back(trace_point(t, m)); };

  if (c.dynamic) {
    run.report = solve_dynamic(c.model, c.dynamics, observer);
  } else if (policy == StepPolicy::Constant) {
    ConstantStepResult r = solve_constant_steps(c.model, c.solver);
    run.report = std::move(r.report);
    run.n_steps_min = r.n_steps_min;
    if (run.report.success) c.model = std::move(r.solution);
    if (traced) run.trace.push_back(trace_point(1.0, c.model));
  } else {
    if (traced) run.trace.push_back(trace_point(0.0, c.model));
    run.report = solve_static(c.model, c.solver, observer);
  }
  return run;
}

double solution_distance(const Model& a, const Model& b, double u_max, double length) {
  return l2_error(a, model_centerline(b), u_max, length);
}

StudyResult run_study(const StudyOptions& o) {
  if (o.meshes.empty()) throw Error("study: no meshes given");
  CaseOptions first = o.base;
  first.n_elements = o.meshes.front();
  const CaseSetup probe = build_case(first);

  StudyResult result;
  result.tag = o.base.tag;
  result.element = to_string(o.base.element.kind);
  result.locking = to_string(o.base.element.locking);
  result.zeta = probe.zeta;
  result.energy_scale = probe.energy_scale;
  const Reference ref = make_reference(o, probe);
  result.reference = ref.label;
  result.u_max = ref.u_max;

  for (int n : o.meshes) {
    CaseOptions opts = o.base;
    opts.n_elements = n;
    CaseRun run = run_case(opts, o.steps);
    const Model& m = run.setup.model;

    StudyRow row;
    row.n_ele = n;
    row.n_dof = m.dof_total();
    row.n_steps = run.report.n_steps;
    row.n_iter_tot = run.report.n_iter_tot;
    row.converged = run.report.success;
    row.message = run.report.message;
    row.l2_err = row.energy_err = row.order_l2 = row.order_e = kNaN;
    row.trace = std::move(run.trace);
    if (row.converged) {
      row.energy = m.internal_energy();
      if (run.setup.tip_node >= 0) row.tip = m.node(run.setup.tip_node).d;
      if (ref.curve) {
        try {
          row.l2_err = l2_error(m, ref.curve, ref.u_max, run.setup.initial.length, o.window);
        } catch (const Error& e) {
          row.message = e.what();
        }
      }
      if (ref.energy) row.energy_err = energy_error(row.energy, *ref.energy);
      if (!run.setup.dynamic && run.setup.clamp_node >= 0)
        row.audit = conservation_audit(m, run.setup.clamp_node);
      if (o.keep_solutions) row.solution = m.samples();
    }
    if (!result.rows.empty()) {
      const StudyRow& prev = result.rows.back();
      const double h_ratio = static_cast<double>(n) / prev.n_ele;
      row.order_l2 = observed_order(prev.l2_err, row.l2_err, h_ratio, 1.0);
      row.order_e = observed_order(prev.energy_err, row.energy_err, h_ratio, 1.0);
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

void write_csv(std::ostream& out, const StudyResult& r) {
  out << "case,element,locking,zeta,n_ele,n_dof,l2_err,energy_err,order_l2,order_e,n_steps,n_iter_tot\n";
  for (const StudyRow& row : r.rows) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.tag, r.element, r.locking, r.zeta,
                       row.n_ele, row.n_dof, csv_number(row.l2_err), csv_number(row.energy_err),
                       csv_number(row.order_l2), csv_number(row.order_e), row.n_steps, row.n_iter_tot);
  }
}

std::string summary_json(const StudyResult& r) {
  nlohmann::json j;
  j["case"] = r.tag;
  j["element"] = r.element;
  j["locking"] = r.locking;
  j["zeta"] = r.zeta;
  j["reference"] = r.reference;
  j["u_max"] = r.u_max;
  j["u_max_rule"] = "max |r_ref(s) - r_0(s)| over 4001 equidistant arc-length samples";
  j["energy_scale"] = r.energy_scale;
  j["rows"] = nlohmann::json::array();
  for (const StudyRow& row : r.rows) {
    nlohmann::json jr = {
        {"n_ele", row.n_ele},
        {"n_dof", row.n_dof},
        {"converged", row.converged},
        {"l2_err", number_or_null(row.l2_err)},
        {"energy_err", number_or_null(row.energy_err)},
        {"order_l2", number_or_null(row.order_l2)},
        {"order_e", number_or_null(row.order_e)},
        {"n_steps", row.n_steps},
        {"n_iter_tot", row.n_iter_tot},
        {"energy", row.energy},
        {"tip", vec_json(row.tip)},
    };
    if (!row.message.empty()) jr["message"] = row.message;
    if (row.audit) {
      jr["balance"] = {
          {"support_force", vec_json(row.audit->support.force)},
          {"support_moment", vec_json(row.audit->support.moment)},
          {"applied_force", vec_json(row.audit->applied.force)},
          {"applied_moment", vec_json(row.audit->applied.moment)},
          {"force_gap", row.audit->force_gap},
          {"moment_gap", row.audit->moment_gap},
      };
    }
    if (!row.trace.empty()) {
      const TracePoint& last = row.trace.back();
      jr["final_energy"] = {{"time", last.time}, {"kinetic", last.kinetic}, {"internal", last.internal}};
    }
    j["rows"].push_back(std::move(jr));
  }
  return j.dump(2);
}

void write_solution(std::ostream& out, const std::vector<SamplePoint>& points) {
  out << "# s x y z q0 q1 q2 q3\n";
  for (const SamplePoint& p : points) {
    out << fmt::format("{:.12e} {:.12e} {:.12e} {:.12e} {:.12e} {:.12e} {:.12e} {:.12e}\n", p.s, p.r.x(),
                       p.r.y(), p.r.z(), p.q.w(), p.q.x(), p.q.y(), p.q.z());
  }
}

void write_trace(std::ostream& out, const std::vector<TracePoint>& trace) {
  out << "# time kinetic internal total\n";
  for (const TracePoint& p : trace) {
    out << fmt::format("{:.10e} {:.12e} {:.12e} {:.12e}\n", p.time, p.kinetic, p.internal,
                       p.kinetic + p.internal);
  }
}

}  // namespace gebeam
