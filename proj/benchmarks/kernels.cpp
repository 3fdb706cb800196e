#include <benchmark/benchmark.h>

#include "gebeam/study.hpp"

namespace {

using namespace gebeam;

CaseSetup helix(ElementKind kind, int n) {
  CaseOptions o;
  o.tag = "slope-helix";
  o.element.kind = kind;
  o.n_elements = n;
  return build_case(o);
}

void BM_ExpLog(benchmark::State& state) {
  Vector3d psi(0.3, -1.2, 0.8);
  for (auto _ : state) {
    const Matrix3d r = so3::exp_map<double>(psi);
    psi = so3::log_map<double>(r);
    benchmark::DoNotOptimize(psi);
  }
}
BENCHMARK(BM_ExpLog);

void BM_ElementEvaluate(benchmark::State& state) {
  const auto kind = static_cast<ElementKind>(state.range(0));
  const CaseSetup c = helix(kind, 4);
  const Element& e = c.model.element(1);
  EvalContext ctx;
  for (auto _ : state) benchmark::DoNotOptimize(e.evaluate(c.model.nodes(), ctx));
  state.SetLabel(to_string(kind));
}
BENCHMARK(BM_ElementEvaluate)
    ->Arg(static_cast<int>(ElementKind::CJ))
    ->Arg(static_cast<int>(ElementKind::HSR))
    ->Arg(static_cast<int>(ElementKind::SkTan))
    ->Arg(static_cast<int>(ElementKind::SkTanCS))
    ->Arg(static_cast<int>(ElementKind::WkTan))
    ->Arg(static_cast<int>(ElementKind::WkRot));

void BM_Assemble(benchmark::State& state) {
  const CaseSetup c = helix(ElementKind::WkTan, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(c.model.assemble(0.5, nullptr));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Assemble)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_LinearSolve(benchmark::State& state) {
  const CaseSetup c = helix(ElementKind::WkTan, static_cast<int>(state.range(0)));
  const AssembledSystem sys = c.model.assemble(0.0, nullptr);
  const Eigen::VectorXd rhs = Eigen::VectorXd::Ones(sys.residual.size());
  for (auto _ : state) benchmark::DoNotOptimize(linear_solve(sys.stiffness, rhs));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LinearSolve)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_NewtonArcSegment(benchmark::State& state) {
  CaseOptions o;
  o.tag = "arc-segment";
  o.element.kind = ElementKind::WkTan;
  o.n_elements = 8;
  const CaseSetup base = build_case(o);
  for (auto _ : state) {
    CaseSetup c = base;
    benchmark::DoNotOptimize(solve_static(c.model, c.solver));
  }
}
BENCHMARK(BM_NewtonArcSegment)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
