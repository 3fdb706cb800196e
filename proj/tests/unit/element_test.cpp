#include <random>

#include <gtest/gtest.h>

#include "checks.hpp"
#include "gebeam/study.hpp"

namespace gebeam {
namespace {

class StiffnessGate : public ::testing::TestWithParam<testing::ElementVariant> {};

TEST_P(StiffnessGate, StaticTangentMatchesFiniteDifferences) {
  const testing::GateResult r = testing::stiffness_gate(GetParam(), 20, 11u, false);
  EXPECT_LT(r.worst, 1e-5) << r.label;
}

TEST_P(StiffnessGate, DynamicTangentMatchesFiniteDifferences) {
  if (GetParam().kind == ElementKind::SkNonObjective) GTEST_SKIP() << "statics only";
  const testing::GateResult r = testing::stiffness_gate(GetParam(), 20, 12u, true);
  EXPECT_LT(r.worst, 1e-5) << r.label;
}

TEST_P(StiffnessGate, InitialStateIsStressFree) {
  testing::SampleElement s = testing::make_sample_element(GetParam());
  const ElementOutput out = s.element->evaluate(s.nodes, EvalContext{});
  EXPECT_LT(out.residual.norm(), 1e-13) << s.label;
  EXPECT_LT(std::abs(out.energy), 1e-20) << s.label;
}

std::string variant_name(const ::testing::TestParamInfo<testing::ElementVariant>& info) {
  std::string name = testing::make_sample_element(info.param).label;
  for (char& c : name)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return name;
}

INSTANTIATE_TEST_SUITE_P(AllElements, StiffnessGate, ::testing::ValuesIn(testing::element_variants()),
                         variant_name);

TEST(ElementNames, RoundTrip) {
  for (ElementKind k : {ElementKind::CJ, ElementKind::HSR, ElementKind::SkTan, ElementKind::SkTanCS,
                        ElementKind::SkRot, ElementKind::SkRotCS, ElementKind::WkTan, ElementKind::WkRot,
                        ElementKind::SkNonObjective})
    EXPECT_EQ(element_kind_from_string(to_string(k)), k);
  for (Locking l : {Locking::MCS, Locking::FI, Locking::RI}) EXPECT_EQ(locking_from_string(to_string(l)), l);
  EXPECT_THROW(element_kind_from_string("timoshenko"), Error);
}

TEST(Objectivity, RigidRotationStoresNoEnergy) {
  for (ElementKind k : {ElementKind::SkTan, ElementKind::SkTanCS, ElementKind::WkTan}) {
    CaseOptions o;
    o.tag = "objectivity-quartercircle";
    o.element.kind = k;
    const CaseRun run = run_case(o);
    ASSERT_TRUE(run.report.success) << run.report.message;
    for (const TracePoint& p : run.trace) ASSERT_LT(p.internal / run.setup.energy_scale, 1e-12) << to_string(k);
  }
}

TEST(Objectivity, NonObjectiveControlAccumulatesEnergy) {
  CaseOptions o;
  o.tag = "objectivity-quartercircle";
  o.element.kind = ElementKind::SkNonObjective;
  const CaseRun run = run_case(o);
  double worst = 0.0;
  for (const TracePoint& p : run.trace) worst = std::max(worst, p.internal / run.setup.energy_scale);
  EXPECT_GT(worst, 0.1);
}

TEST(RigidMotion, ResidualVanishesAfterARigidRotation) {
  for (const testing::ElementVariant& v : testing::element_variants()) {
    if (v.kind == ElementKind::SkNonObjective) continue;
    testing::SampleElement s = testing::make_sample_element(v);
    const Matrix3d q = so3::exp_map<double>(Vector3d(0.4, -0.9, 0.3));
    // Superpose the rotation through the nodal increments so every layout is covered.
    for (Node& n : s.nodes) {
      std::vector<double> delta(dof_count(n.layout), 0.0);
      const Vector3d spin = so3::log_map<double>(q);
      switch (n.layout) {
        case NodeLayout::Frame:
        case NodeLayout::HermiteFrame:
        case NodeLayout::TriadOnly: {
          const int rot = n.layout == NodeLayout::Frame ? 3 : n.layout == NodeLayout::HermiteFrame ? 6 : 0;
          if (n.layout != NodeLayout::TriadOnly) {
            const Vector3d dd = q * n.d - n.d;
            for (int i = 0; i < 3; ++i) delta[i] = dd(i);
          }
          if (n.layout == NodeLayout::HermiteFrame) {
            const Vector3d dt = q * n.t - n.t;
            for (int i = 0; i < 3; ++i) delta[3 + i] = dt(i);
          }
          for (int i = 0; i < 3; ++i) delta[rot + i] = spin(i);
          break;
        }
        default:
          break;
      }
      n.apply_increment(delta.data());
    }
    if (s.nodes.front().layout == NodeLayout::Frame || s.nodes.front().layout == NodeLayout::HermiteFrame) {
      const ElementOutput out = s.element->evaluate(s.nodes, EvalContext{});
      EXPECT_LT(out.residual.norm(), 1e-12) << s.label;
    }
  }
}

}  // namespace
}  // namespace gebeam
