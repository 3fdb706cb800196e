#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "gebeam/study.hpp"

namespace fs = std::filesystem;
using namespace gebeam;

namespace {

struct RunArgs {
  std::string tag;
  std::string element;
  std::string locking = "mcs";
  double zeta = 0.0;
  std::vector<int> meshes;
  int elements = 0;
  int steps = 0;
  std::string step_policy = "adaptive";
  std::string path = "sim";
  double dt = 0.0;
  double rho_inf = -1.0;
  double t_end = 0.0;
  std::vector<double> arc_window;
  std::string out = ".";
  std::string format = "both";
  bool dump = false;
  std::string config;
  bool verbose = false;
};

// Fills every option the command line left unset from a JSON object whose
// keys are the long option names.
void merge_config(CLI::App& cmd, RunArgs& a) {
  std::ifstream in(a.config);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + a.config);
  const nlohmann::json j = nlohmann::json::parse(in);
  auto unset = [&](const char* name) { return cmd.get_option(std::string("--") + name)->count() == 0; };
  auto take = [&](const char* name, auto& field) {
    if (j.contains(name) && unset(name)) j.at(name).get_to(field);
  };
  if (j.contains("case") && a.tag.empty()) j.at("case").get_to(a.tag);
  take("element", a.element);
  take("locking", a.locking);
  take("zeta", a.zeta);
  take("meshes", a.meshes);
  take("elements", a.elements);
  take("steps", a.steps);
  take("step-policy", a.step_policy);
  take("path", a.path);
  take("dt", a.dt);
  take("rho-inf", a.rho_inf);
  take("t-end", a.t_end);
  take("arc-window", a.arc_window);
  take("out", a.out);
  take("format", a.format);
  take("dump", a.dump);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
  spdlog::info("wrote {}", p.string());
}

std::string fmt_num(double v) { return std::isfinite(v) ? fmt::format("{:.4e}", v) : "-"; }

int run(const RunArgs& a) {
  StudyOptions study;
  study.base.tag = a.tag;
  const std::string element = !a.element.empty() ? a.element
                              : a.tag == "elbow-dynamic" ? "wk-rot"
                                                         : "sk-tan";
  study.base.element.kind = element_kind_from_string(element);
  study.base.element.locking = locking_from_string(a.locking);
  study.base.zeta = a.zeta;
  study.base.n_steps0 = a.steps;
  study.base.path = a.path == "suc" ? LoadPath::Successive : LoadPath::Simultaneous;
  study.base.dt = a.dt;
  study.base.rho_inf = a.rho_inf;
  study.base.t_end = a.t_end;
  study.steps = a.step_policy == "constant" ? StepPolicy::Constant : StepPolicy::Adaptive;
  study.keep_solutions = a.dump;
  if (!a.meshes.empty()) study.meshes = a.meshes;
  else study.meshes = {a.elements > 0 ? a.elements : default_elements(a.tag)};
  if (!a.arc_window.empty()) {
    if (a.arc_window.size() != 2) throw CLI::ValidationError("--arc-window", "expects two values");
    study.window = ArcWindow{a.arc_window[0], a.arc_window[1]};
  }

  const StudyResult result = run_study(study);

  fmt::print("{} {} {} zeta={} reference={} u_max={:.6e}\n", result.tag, result.element, result.locking,
             result.zeta, result.reference, result.u_max);
  fmt::print("{:>6} {:>8} {:>12} {:>12} {:>8} {:>8} {:>7} {:>7}  tip\n", "n_ele", "n_dof", "l2_err",
             "energy_err", "ord_l2", "ord_e", "steps", "iters");
  bool all_converged = true;
  for (const StudyRow& r : result.rows) {
    all_converged = all_converged && r.converged;
    fmt::print("{:>6} {:>8} {:>12} {:>12} {:>8} {:>8} {:>7} {:>7}  ({:.8f}, {:.8f}, {:.8f}){}\n", r.n_ele,
               r.n_dof, fmt_num(r.l2_err), fmt_num(r.energy_err), fmt_num(r.order_l2),
               fmt_num(r.order_e), r.n_steps, r.n_iter_tot, r.tip.x(), r.tip.y(), r.tip.z(),
               r.converged ? "" : "  FAILED: " + r.message);
  }

  const fs::path dir(a.out);
  fs::create_directories(dir);
  const std::string stem = fmt::format("{}_{}_{}", result.tag, result.element, result.locking);
  if (a.format == "csv" || a.format == "both") {
    std::ostringstream csv;
    write_csv(csv, result);
    write_file(dir / (stem + ".csv"), csv.str());
  }
  if (a.format == "json" || a.format == "both") write_file(dir / (stem + ".json"), summary_json(result));
  for (const StudyRow& r : result.rows) {
    if (a.dump && !r.solution.empty()) {
      std::ostringstream s;
      write_solution(s, r.solution);
      write_file(dir / fmt::format("{}_n{}_solution.txt", stem, r.n_ele), s.str());
    }
    if (!r.trace.empty()) {
      std::ostringstream s;
      write_trace(s, r.trace);
      write_file(dir / fmt::format("{}_n{}_energy.txt", stem, r.n_ele), s.str());
    }
  }
  return all_converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometrically exact beam benchmarks"};
  app.require_subcommand(1);

  RunArgs args;
  CLI::App* cmd = app.add_subcommand("run", "Solve a benchmark case on one or more meshes");
  cmd->add_option("case", args.tag, "Case tag (see `gebeam cases`)");
  cmd->add_option("--element", args.element, "cj|hsr|sk-tan|sk-tan-cs|sk-rot|sk-rot-cs|wk-tan|wk-rot|sk-sr-time");
  cmd->add_option("--locking", args.locking, "mcs|fi|ri");
  cmd->add_option("--zeta", args.zeta, "Slenderness ratio (case default if omitted)");
  cmd->add_option("--meshes", args.meshes, "Element counts, e.g. 8,16,32")->delimiter(',');
  cmd->add_option("--elements,--elements-per-leg", args.elements, "Single mesh size");
  cmd->add_option("--steps", args.steps, "Initial number of load steps N0");
  cmd->add_option("--step-policy", args.step_policy, "adaptive|constant")
      ->check(CLI::IsMember({"adaptive", "constant"}));
  cmd->add_option("--path", args.path, "Load path for path-independence: sim|suc")
      ->check(CLI::IsMember({"sim", "suc"}));
  cmd->add_option("--dt", args.dt, "Time step size (dynamics)");
  cmd->add_option("--rho-inf", args.rho_inf, "Spectral radius at infinity (dynamics)");
  cmd->add_option("--t-end", args.t_end, "Final time (dynamics)");
  cmd->add_option("--arc-window", args.arc_window, "Restrict the L2 error to s in [a,b]")->delimiter(',');
  cmd->add_option("--out", args.out, "Output directory");
  cmd->add_option("--format", args.format, "csv|json|both")->check(CLI::IsMember({"csv", "json", "both"}));
  cmd->add_flag("--dump", args.dump, "Write the nodal solution of every mesh");
  cmd->add_option("--config", args.config, "JSON file with option defaults");
  cmd->add_flag("-v,--verbose", args.verbose, "Verbose logging");

  app.add_subcommand("cases", "List the available case tags")->callback([] {
    for (const std::string& t : case_tags())
      fmt::print("{:<28} elements={:<3} zeta={}\n", t, default_elements(t), default_zeta(t));
  });

  CLI11_PARSE(app, argc, argv);
  if (!cmd->parsed()) return 0;

  spdlog::set_level(args.verbose ? spdlog::level::info : spdlog::level::warn);
  try {
    if (!args.config.empty()) merge_config(*cmd, args);
    if (args.tag.empty()) throw CLI::ValidationError("case", "a case tag is required");
    return run(args);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
}
