#include "checks.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "gebeam/interp.hpp"
#include "gebeam/so3.hpp"

namespace gebeam::testing {

namespace {

Matrix3d twisted_triad(const Vector3d& tangent, double twist) {
  return so3::rotate_about_first<double>(
      so3::smallest_rotation<double>(Matrix3d::Identity(), tangent.normalized()), twist);
}

SectionProperties sample_section(double mass) {
  SectionProperties s = SectionProperties::standard(10.0, 1.0);
  s.GA3 *= 0.8;  // unequal shear and bending stiffness exercise all couplings
  s.EI2 *= 1.5;
  if (mass > 0.0) {
    s.rhoA = mass;
    s.rhoI2 = 1e-3 * mass;
    s.rhoI3 = 2e-3 * mass;
    s.rhoIP = 3e-3 * mass;
  }
  return s;
}

Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Vector3d v(n(rng), n(rng), n(rng));
  return v.normalized();
}

double relative(const Matrix3d& a, const Matrix3d& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

}  // namespace

void PrintTo(const ElementVariant& variant, std::ostream* os) {
  *os << make_sample_element(variant).label;
}

std::vector<ElementVariant> element_variants() {
  std::vector<ElementVariant> out;
  for (int n = 2; n <= 5; ++n) out.push_back({ElementKind::CJ, Locking::RI, n});
  for (int n = 2; n <= 5; ++n) out.push_back({ElementKind::CJ, Locking::FI, n});
  out.push_back({ElementKind::HSR, Locking::MCS});
  for (ElementKind k : {ElementKind::SkTan, ElementKind::SkTanCS, ElementKind::SkRot, ElementKind::SkRotCS,
                        ElementKind::WkTan, ElementKind::WkRot})
    for (Locking l : {Locking::MCS, Locking::FI}) out.push_back({k, l});
  out.push_back({ElementKind::SkNonObjective, Locking::MCS});
  return out;
}

SampleElement make_sample_element(const ElementVariant& v, double mass) {
  SampleElement s;
  std::ostringstream label;
  label << to_string(v.kind) << '-' << to_string(v.locking);
  if (v.kind == ElementKind::CJ) label << '-' << v.cj_nodes;
  s.label = label.str();
  const SectionProperties section = sample_section(mass);

  if (v.kind == ElementKind::CJ) {
    const LagrangeBasis basis = LagrangeBasis::equidistant(v.cj_nodes);
    std::vector<int> ids;
    for (int k = 0; k < v.cj_nodes; ++k) {
      const double xi = basis.nodes()[k];
      Node n;
      n.layout = NodeLayout::Frame;
      n.d = Vector3d(0.5 * xi, 0.1 * xi * xi, 0.025 * xi);
      n.triad = twisted_triad(Vector3d(1.0, 0.4 * xi, 0.05), 0.1 * xi);
      s.nodes.push_back(n);
      ids.push_back(k);
    }
    s.element = make_cj_element(ids, section, v.locking, s.nodes);
    return s;
  }

  HermiteElementGeometry g;
  g.d1 = Vector3d::Zero();
  g.d2 = Vector3d(1.0, 0.3, 0.1);
  g.t1 = Vector3d(1.0, 0.2, 0.0).normalized();
  g.t2 = Vector3d(0.8, 0.5, 0.2).normalized();
  g.triad1 = twisted_triad(g.t1, 0.0);
  g.triad2 = twisted_triad(g.t2, 0.15);
  g.triad_mid = twisted_triad(g.d2 - g.d1, 0.07);
  s.nodes.resize(3);
  if (v.kind == ElementKind::HSR) s.element = make_hsr_element({0, 1, 2}, g, section, s.nodes);
  else s.element = make_kirchhoff_element({v.kind, v.locking}, {0, 1, 2}, g, section, s.nodes);
  return s;
}

void perturb(SampleElement& sample, std::mt19937_64& rng, double size) {
  std::uniform_real_distribution<double> u(-size, size);
  for (Node& n : sample.nodes) {
    std::vector<double> delta(dof_count(n.layout));
    for (double& x : delta) x = u(rng);
    n.apply_increment(delta.data());
  }
}

GateResult stiffness_gate(const ElementVariant& variant, int states, unsigned seed, bool dynamic) {
  std::mt19937_64 rng(seed);
  const GenAlphaParams params = derive_params(0.9, 0.1);
  GateResult result;
  for (int i = 0; i < states; ++i) {
    SampleElement s = make_sample_element(variant, dynamic ? 1.0 : 0.0);
    result.label = s.label;
    EvalContext ctx;
    if (dynamic) {
      s.element->init_dynamics(s.nodes);
      ctx.dynamics = &params;
    }
    perturb(s, rng, 0.1);
    const ElementOutput out = s.element->evaluate(s.nodes, ctx);
    const Eigen::MatrixXd fd = fd_stiffness(*s.element, s.nodes, ctx, 1e-6);
    result.worst = std::max(result.worst, (fd - out.stiffness).norm() / out.stiffness.norm());
    ++result.states;
  }
  return result;
}

PropertyResult so3_property_suite(int samples, unsigned seed) {
  using namespace so3;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PropertyResult r;
  auto check = [&](bool ok, const char* what, int i) {
    if (ok) return;
    if (r.failures++ == 0) r.first_failure = std::string(what) + " at sample " + std::to_string(i);
  };

  for (int i = 0; i < samples; ++i) {
    // One in ten samples probes the small-angle branches.
    const double angle = i % 10 == 0 ? std::pow(10.0, -8.0 + 4.0 * unit(rng)) : (M_PI - 1e-3) * unit(rng);
    const Vector3d psi = angle * random_unit(rng);
    const Matrix3d rot = exp_map<double>(psi);

    check((rot.transpose() * rot - Matrix3d::Identity()).norm() < 1e-13, "orthonormality", i);
    check(std::abs(rot.determinant() - 1.0) < 1e-13, "determinant", i);
    check((log_map<double>(rot) - psi).norm() < 1e-10 * std::max(1.0, angle), "log(exp(psi))", i);

    const Matrix3d other = exp_map<double>(Vector3d(M_PI * unit(rng) * random_unit(rng)));
    check(relative(exp_map<double>(log_map<double>(other)), other) < 1e-13, "exp(log(R))", i);

    const Matrix3d t = tangent_op<double>(psi);
    const Matrix3d t_inv = tangent_op_inv<double>(psi);
    check((t * t_inv - Matrix3d::Identity()).norm() < 1e-10, "T T^-1", i);

    // T^-1 maps an additive rotation-vector increment to the spatial spin.
    const Vector3d dpsi = random_unit(rng);
    const double h = 1e-6;
    const Vector3d spin = (log_map<double>(Matrix3d(exp_map<double>(Vector3d(psi + h * dpsi)) * rot.transpose())) -
                           log_map<double>(Matrix3d(exp_map<double>(Vector3d(psi - h * dpsi)) * rot.transpose()))) /
                          (2.0 * h);
    check((spin - t_inv * dpsi).norm() < 1e-7, "tangent operator vs finite difference", i);

    Vector3d g1 = random_unit(rng);
    const Vector3d gb1 = other.col(0);
    if (gb1.dot(g1) < -0.99) g1 = -g1;
    const Matrix3d sr = smallest_rotation<double>(other, g1);
    check((sr.col(0) - g1).norm() < 1e-14, "smallest rotation first axis", i);
    // The map loses accuracy as the axes approach opposite directions.
    const double sr_tol = 1e-14 / (1.0 + gb1.dot(g1));
    check((sr.transpose() * sr - Matrix3d::Identity()).norm() < sr_tol, "smallest rotation orthonormality", i);
    const Vector3d axis = gb1.cross(g1);
    const Vector3d expected = axis.norm() < 1e-14
                                  ? Vector3d::Zero()
                                  : Vector3d(axis.normalized() * std::atan2(axis.norm(), gb1.dot(g1)));
    check((log_map<double>(Matrix3d(sr * other.transpose())) - expected).norm() < 1e2 * sr_tol,
          "smallest rotation is minimal", i);

    const double phi = M_PI * (2.0 * unit(rng) - 1.0);
    check(std::abs(relative_angle<double>(rotate_about_first<double>(other, phi), other) - phi) < 1e-12,
          "relative angle", i);

    const Quaternion<double> q = quaternion_from_triad<double>(rot);
    check(std::abs(q.w * q.w + q.v.squaredNorm() - 1.0) < 1e-13 && q.w >= 0.0, "unit quaternion", i);
  }
  r.samples = samples;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace gebeam::testing
