#include "gebeam/cases.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

#include "gebeam/errors.hpp"
#include "gebeam/interp.hpp"

namespace gebeam {

namespace {

constexpr double kLength = 1000.0;

Matrix3d rotation(const Vector3d& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

InitialCurve straight_curve(double length, const Vector3d& origin = Vector3d::Zero(),
                            const Matrix3d& triad = Matrix3d::Identity()) {
  InitialCurve c;
  const Vector3d dir = triad.col(0);
  c.position = [origin, dir](double s) -> Vector3d { return origin + s * dir; };
  c.tangent = [dir](double) -> Vector3d { return dir; };
  c.triad = [triad](double) -> Matrix3d { return triad; };
  c.length = length;
  return c;
}

InitialCurve arc_curve(double radius, double angle) {
  InitialCurve c;
  c.position = circle_arc(radius);
  c.tangent = [radius](double s) -> Vector3d { return {std::cos(s / radius), std::sin(s / radius), 0.0}; };
  c.triad = [radius](double s) -> Matrix3d { return rotation(Vector3d::UnitZ(), s / radius); };
  c.length = radius * angle;
  return c;
}

// Slope-helix parameter: height coefficient and arc length per radius.
constexpr double kHelixLoops = 4.5;
double helix_height_coeff() { return 6.0 / (81.0 * M_PI * M_PI); }
double helix_arc_per_radius(double beta) {
  const double k = 2.0 * helix_height_coeff();
  return 0.5 * (beta * std::sqrt(1.0 + k * k * beta * beta) + std::asinh(k * beta) / k);
}

double helix_beta(double s, double radius) {
  const double k = 2.0 * helix_height_coeff();
  double beta = s / radius;
  for (int it = 0; it < 60; ++it) {
    const double step = (radius * helix_arc_per_radius(beta) - s) / (radius * std::sqrt(1.0 + k * k * beta * beta));
    beta -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(beta))) break;
  }
  return beta;
}

struct LoadHistory {
  LoadFactor moment;
  LoadFactor force;
};

SectionProperties twisted_helix_section(double zeta) {
  const double b = kLength / zeta;
  return SectionProperties::rectangle(1.0, 0.5, b, 0.5 * b, 3.2875e-2 * std::pow(b, 4));
}

void require_rotation_nodes(const CaseOptions& o) {
  const ElementKind k = o.element.kind;
  if (is_kirchhoff(k) && !uses_rot_layout(k))
    throw Unsupported("case " + o.tag + ": rigid joints need nodal rotation vectors (use a ROT variant, cj or hsr)");
}

}  // namespace

Centerline circle_arc(double radius) {
  return [radius](double s) -> Vector3d {
    return {radius * std::sin(s / radius), radius * (1.0 - std::cos(s / radius)), 0.0};
  };
}

Centerline bent_helix(double radius) {
  return [radius](double s) -> Vector3d {
    const double beta = s / (std::sqrt(2.0) * radius);
    return radius * Vector3d((std::sin(beta) + beta) / std::sqrt(2.0), 1.0 - std::cos(beta),
                             (beta - std::sin(beta)) / std::sqrt(2.0));
  };
}

double slope_helix_radius(double length) {
  return length / helix_arc_per_radius(2.0 * M_PI * kHelixLoops);
}

InitialCurve slope_helix_curve(double length, double twist_per_loop) {
  const double radius = slope_helix_radius(length);
  const double c = helix_height_coeff();
  auto frame = [=](double s) -> Matrix3d {
    const double beta = helix_beta(s, radius);
    const Vector3d d1(std::cos(beta), -std::sin(beta), 2.0 * c * beta);
    const Vector3d d2(-std::sin(beta), -std::cos(beta), 2.0 * c);
    const Vector3d t = d1.normalized();
    const Vector3d n = (d2 - d2.dot(t) * t).normalized();
    Matrix3d m;
    m << t, n, t.cross(n);
    // Twist grows uniformly in arc length, 4.5 loops in total.
    return so3::rotate_about_first<double>(m, twist_per_loop * 4.5 * s / length);
  };
  InitialCurve curve;
  curve.position = [=](double s) -> Vector3d {
    const double beta = helix_beta(s, radius);
    return radius * Vector3d(std::sin(beta), std::cos(beta) - 1.0, c * beta * beta);
  };
  curve.tangent = [=](double s) -> Vector3d {
    const double beta = helix_beta(s, radius);
    return Vector3d(std::cos(beta), -std::sin(beta), 2.0 * c * beta).normalized();
  };
  curve.triad = frame;
  curve.length = length;
  return curve;
}

BeamMesh add_beam(Model& model, const InitialCurve& curve, int n_elements, const ElementSpec& spec,
                  const SectionProperties& section) {
  if (n_elements < 1) throw Error("mesh: at least one element required");
  const double h = curve.length / n_elements;
  BeamMesh mesh;
  auto new_node = [&](double s) {
    Node n;
    n.d = curve.position(s);
    n.t = curve.tangent(s);
    n.triad = curve.triad(s);
    n.ref_triad = n.triad;
    n.s = s;
    return model.add_node(n);
  };

  int start = new_node(0.0);
  mesh.first_node = start;
  for (int e = 0; e < n_elements; ++e) {
    const double s0 = e * h;
    const double s1 = (e + 1 == n_elements) ? curve.length : s0 + h;
    ElementPtr element;
    if (spec.kind == ElementKind::CJ) {
      if (spec.cj_nodes < 2 || spec.cj_nodes > 5) throw Error("mesh: CJ elements support 2 to 5 nodes");
      const std::vector<double> xis = spec.cj_nodes == 3 ? three_point_basis().nodes()
                                                         : LagrangeBasis::equidistant(spec.cj_nodes).nodes();
      std::vector<int> ids{start};
      for (std::size_t k = 1; k < xis.size(); ++k) ids.push_back(new_node(s0 + 0.5 * (xis[k] + 1.0) * (s1 - s0)));
      element = make_cj_element(ids, section, spec.locking, model.nodes());
      start = ids[1];
    } else {
      const int end = new_node(s1);
      const int mid = new_node(0.5 * (s0 + s1));
      HermiteElementGeometry g{curve.position(s0), curve.tangent(s0), curve.position(s1),
                               curve.tangent(s1), curve.triad(s0), curve.triad(s1),
                               curve.triad(0.5 * (s0 + s1))};
      if (spec.kind == ElementKind::HSR)
        element = make_hsr_element({start, end, mid}, g, section, model.nodes());
      else
        element = make_kirchhoff_element({spec.kind, spec.locking}, {start, end, mid}, g, section, model.nodes());
      start = end;
    }
    mesh.elements.push_back(model.add_element(std::move(element)));
  }
  mesh.last_node = start;
  return mesh;
}

const std::vector<std::string>& case_tags() {
  static const std::vector<std::string> tags{
      "objectivity-quartercircle", "bend2d-M", "bend2d-MF", "bend2d-M8", "bend2d-M8F", "helix-from-straight",
      "path-independence", "arc-segment", "slope-helix", "twisted-helix", "elbow-dynamic"};
  return tags;
}

int default_elements(const std::string& tag) {
  if (tag == "objectivity-quartercircle") return 1;
  if (tag == "slope-helix" || tag == "twisted-helix") return 16;
  if (tag == "elbow-dynamic") return 2;
  return 8;
}

double default_zeta(const std::string& tag) {
  if (tag == "objectivity-quartercircle") return 10.0;
  if (tag.rfind("bend2d", 0) == 0) return 10000.0;
  if (tag == "twisted-helix") return 1000.0;
  if (tag == "elbow-dynamic") return 100.0;
  return 100.0;
}

// The planar bending studies keep the whole clamped tangent fixed; the other
// cantilevers leave its magnitude free.
bool default_clamp_tangent_length(const std::string& tag) { return tag.rfind("bend2d", 0) == 0; }

CaseSetup build_case(const CaseOptions& o) {
  const auto& tags = case_tags();
  if (std::find(tags.begin(), tags.end(), o.tag) == tags.end()) throw Error("unknown case: " + o.tag);
  if (o.element.kind == ElementKind::SkNonObjective && o.tag != "objectivity-quartercircle")
    throw Unsupported("the non-objective interpolation is only available for the rigid-rotation case");

  CaseSetup c;
  c.tag = o.tag;
  c.zeta = o.zeta > 0.0 ? o.zeta : default_zeta(o.tag);
  const int n_ele = o.n_elements > 0 ? o.n_elements : default_elements(o.tag);
  c.solver = default_config(c.zeta);
  c.solver.n_steps0 = 1;

  auto finish_cantilever = [&](const InitialCurve& curve, const SectionProperties& section) {
    c.initial = curve;
    const BeamMesh mesh = add_beam(c.model, curve, n_ele, o.element, section);
    c.clamp_node = mesh.first_node;
    c.tip_node = mesh.last_node;
    c.model.clamp(c.clamp_node);
    if (o.clamp_tangent_length.value_or(default_clamp_tangent_length(o.tag)))
      c.model.fix_tangent_length(c.clamp_node);
  };
  auto tip_load = [&](const Vector3d& force, const Vector3d& moment, LoadHistory history = {}) {
    if (moment.squaredNorm() > 0.0) {
      PointLoad p{c.tip_node, Vector3d::Zero(), moment};
      if (history.moment) p.factor = history.moment;
      c.model.add_load(p);
    }
    if (force.squaredNorm() > 0.0) {
      PointLoad p{c.tip_node, force, Vector3d::Zero()};
      if (history.force) p.factor = history.force;
      c.model.add_load(p);
    }
  };

  if (o.tag == "objectivity-quartercircle") {
    const SectionProperties sec = SectionProperties::standard(c.zeta, kLength);
    c.initial = arc_curve(2.0 * kLength / M_PI, 0.5 * M_PI);
    const BeamMesh mesh = add_beam(c.model, c.initial, n_ele, o.element, sec);
    c.clamp_node = mesh.first_node;
    c.tip_node = mesh.last_node;
    c.model.fix_position(c.clamp_node);
    const Matrix3d start = c.initial.triad(0.0);
    c.model.prescribe_triad(c.clamp_node, [start](double t) -> Matrix3d {
      return rotation(Vector3d::UnitX(), 20.0 * M_PI * t) * start;
    });
    c.reference_energy = 0.0;
    c.energy_scale = 0.5 * sec.EI3 * M_PI * M_PI / (4.0 * kLength);
    c.solver.n_steps0 = 100;
    c.solver.adaptive = false;
  } else if (o.tag.rfind("bend2d", 0) == 0) {
    const SectionProperties sec = SectionProperties::standard(c.zeta, kLength);
    finish_cantilever(straight_curve(kLength), sec);
    const double ei = sec.EI3;
    const double m = ei * M_PI / (2.0 * kLength);
    const bool eight = o.tag == "bend2d-M8" || o.tag == "bend2d-M8F";
    const double moment = eight ? 8.0 * m : m;
    double force = 0.0;
    if (o.tag == "bend2d-MF") force = 12.0 * ei / (kLength * kLength);
    if (o.tag == "bend2d-M8F") force = 10.0 * moment / kLength;
    tip_load(Vector3d(0.0, force, 0.0), Vector3d(0.0, 0.0, moment));
    if (force == 0.0) {
      c.reference = circle_arc(kLength / (eight ? 4.0 * M_PI : 0.5 * M_PI));
      c.reference_energy = moment * moment * kLength / (2.0 * ei);
    }
    if (eight) c.solver.n_steps0 = 10;
  } else if (o.tag == "helix-from-straight") {
    const SectionProperties sec = SectionProperties::standard(c.zeta, kLength);
    finish_cantilever(straight_curve(kLength), sec);
    const double m = 12.0 * sec.EI3 / kLength;
    tip_load(Vector3d::Zero(), Vector3d(m, 0.0, m));
    c.reference = bent_helix(sec.EI3 / (2.0 * m));
    c.reference_energy = kLength * m * m / sec.EI3;
    c.solver.n_steps0 = 10;
  } else if (o.tag == "path-independence") {
    const SectionProperties sec = SectionProperties::standard(c.zeta, kLength);
    finish_cantilever(straight_curve(kLength), sec);
    const double m = 4.0 * sec.EI3 * M_PI / kLength;
    const double f = 12.0 * sec.EI3 / (kLength * kLength);
    LoadHistory history;
    if (o.path == LoadPath::Successive) {
      history.moment = [](double t) { return std::min(2.0 * t, 1.0); };
      history.force = [](double t) { return std::clamp(2.0 * t - 1.0, 0.0, 1.0); };
    }
    tip_load(Vector3d(0.0, 0.0, f), Vector3d(0.0, 0.0, m), history);
    c.solver.n_steps0 = 10;
  } else if (o.tag == "arc-segment") {
    const double radius = 100.0;
    const double side = radius / c.zeta;
    const double e_mod = 1e7;
    const SectionProperties sec =
        SectionProperties::rectangle(e_mod, 0.5 * e_mod, side, side, std::pow(side, 4) / 6.0, 1.0);
    finish_cantilever(arc_curve(radius, 0.25 * M_PI), sec);
    tip_load(Vector3d(0.0, 0.0, 600.0 * std::pow(side, 4)), Vector3d::Zero());
    // Residual tolerances refer to the standard section of the same slenderness.
    // The round-off floor of the residual scales with axial stiffness times coordinate size.
    c.solver.tol_res *= sec.EA * radius / (SectionProperties::standard(c.zeta, kLength).EA * kLength);
  } else if (o.tag == "slope-helix") {
    const SectionProperties sec = SectionProperties::standard(c.zeta, kLength);
    finish_cantilever(slope_helix_curve(kLength), sec);
    tip_load(Vector3d(0.0, 0.0, 2.4e-4 * sec.EI3), Vector3d::Zero());
    c.solver.n_steps0 = 10;
  } else if (o.tag == "twisted-helix") {
    const SectionProperties sec = twisted_helix_section(c.zeta);
    finish_cantilever(slope_helix_curve(kLength, 2.0 * M_PI), sec);
    const double b = kLength / c.zeta;
    tip_load(Vector3d(0.0, 0.0, 5e-6 * std::pow(b, 4)), Vector3d::Zero());
    c.solver.n_steps0 = 10;
  } else if (o.tag == "elbow-dynamic") {
    require_rotation_nodes(o);
    SectionProperties sec;
    sec.EA = sec.GA2 = sec.GA3 = 1e6;
    sec.GIT = sec.EI2 = sec.EI3 = 1e3;
    sec.rhoA = 1.0;
    const double inertia_scale = 1e4;
    sec.rhoI2 = sec.rhoI3 = 1e-3 * inertia_scale;
    sec.rhoIP = 2e-3 * inertia_scale;
    const double leg = 10.0;
    const Matrix3d along_y = rotation(Vector3d::UnitZ(), 0.5 * M_PI);
    const InitialCurve first = straight_curve(leg, Vector3d::Zero(), along_y);
    const InitialCurve second = straight_curve(leg, Vector3d(0.0, leg, 0.0));
    const BeamMesh a = add_beam(c.model, first, n_ele, o.element, sec);
    const BeamMesh b = add_beam(c.model, second, n_ele, o.element, sec);
    c.model.add_joint(a.last_node, b.first_node);
    c.model.clamp(a.first_node);
    c.clamp_node = a.first_node;
    c.tip_node = b.last_node;
    c.initial.length = 2.0 * leg;
    c.initial.position = [=](double s) -> Vector3d {
      return s <= leg ? first.position(s) : second.position(s - leg);
    };
    PointLoad p{a.last_node, Vector3d(0.0, 0.0, 50.0), Vector3d::Zero()};
    p.factor = [](double t) { return t <= 1.0 ? t : std::max(0.0, 2.0 - t); };
    c.model.add_load(p);
    c.dynamic = true;
    c.dynamics.dt = o.dt > 0.0 ? o.dt : 0.25;
    c.dynamics.rho_inf = o.rho_inf >= 0.0 ? o.rho_inf : 0.95;
    c.dynamics.t_end = o.t_end > 0.0 ? o.t_end : 50.0;
    c.solver.tol_res = 1e-8;
    c.dynamics.newton = c.solver;
  }
  if (o.n_steps0 > 0) c.solver.n_steps0 = o.n_steps0;
  return c;
}

}  // namespace gebeam
