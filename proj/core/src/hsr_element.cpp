#include <cmath>

#include "gebeam/element.hpp"
#include "gebeam/errors.hpp"
#include "gebeam/interp.hpp"
#include "gebeam/quadrature.hpp"
#include "gebeam/so3.hpp"

namespace gebeam {
namespace {

constexpr int kDofs = 21;
template <class T>
using VecH = Eigen::Matrix<T, kDofs, 1>;

struct HermitePoint {
  double weight = 0.0;
  double J = 1.0;
  Eigen::Vector4d h, h_s;  // Hermite values and arc-length derivatives (c/2 folded in)
  Eigen::VectorXd l, l_s;  // three-point Lagrange basis
};

// Offsets of d1, t1, theta1, d2, t2, theta2, theta3.
constexpr int kD[2] = {0, 9};
constexpr int kT[2] = {3, 12};
constexpr int kTheta[3] = {6, 15, 18};

class HSRElement final : public Element {
 public:
  HSRElement(std::array<int, 3> nodes, const HermiteElementGeometry& geo,
             const SectionProperties& section, std::vector<Node>& store)
      : section_(section) {
    section_.validate();
    nodes_.assign(nodes.begin(), nodes.end());
    const double t1n = geo.t1.norm(), t2n = geo.t2.norm();
    if (!(t1n > 0.0) || !(t2n > 0.0)) throw DegenerateGeometry("hsr element: zero nodal tangent");
    d0_ = {geo.d1, geo.d2};
    t0_ = {Vector3d(geo.t1 / t1n), Vector3d(geo.t2 / t2n)};
    c_ = element_length_fixpoint(d0_[0], t0_[0], d0_[1], t0_[1]);

    const std::array<Matrix3d, 3> triads{geo.triad1, geo.triad2, geo.triad_mid};
    for (int b = 0; b < 2; ++b) {
      Node& n = store.at(nodes[b]);
      n.layout = NodeLayout::HermiteFrame;
      n.d = d0_[b];
      n.t = t0_[b];
      n.triad = triads[b];
    }
    Node& mid = store.at(nodes[2]);
    mid.layout = NodeLayout::TriadOnly;
    mid.triad = triads[2];

    const GaussRule& rule = gauss_legendre(4);
    for (int g = 0; g < rule.size(); ++g) gps_.push_back(make_point(rule.points[g], rule.weights[g]));
    cps_ = {make_point(-1.0, 0.0), make_point(1.0, 0.0), make_point(0.0, 0.0)};

    const Dofs<double> x = values(store);
    const GeodesicInterpolation<double> field(x.triads, three_point_basis());
    for (int c = 0; c < 3; ++c)
      gamma0_[c] = x.triads[c].transpose() * combine<double>(x, cps_[c].h_s);
    for (const auto& p : gps_) k0_.push_back(field.eval(p.l, p.l_s, false).K);
  }

  std::unique_ptr<Element> clone() const override { return std::make_unique<HSRElement>(*this); }
  ElementKind kind() const override { return ElementKind::HSR; }

  ElementOutput evaluate(const std::vector<Node>& nodes, const EvalContext& ctx) const override {
    ElementOutput out;
    const Dofs<double> x0 = values(nodes);
    if (!ctx.stiffness) {
      out.residual = residual<double>(x0, ctx, out.energy);
      return out;
    }
    using D = Dual<kDofs>;
    Dofs<D> x;
    auto seeded = [](const Vector3d& v, int offset) {
      Vec3<D> out;
      for (int c = 0; c < 3; ++c) out(c) = D(v(c), VecH<double>::Unit(offset + c));
      return out;
    };
    for (int b = 0; b < 2; ++b) {
      x.d[b] = seeded(x0.d[b], kD[b]);
      x.t[b] = seeded(x0.t[b], kT[b]);
    }
    for (int i = 0; i < 3; ++i)
      x.triads[i] = so3::exp_map<D>(seeded(Vector3d::Zero(), kTheta[i])) * x0.triads[i].cast<D>();
    D energy;
    const VecH<D> r = residual<D>(x, ctx, energy);
    out.energy = energy.value();
    out.residual.resize(kDofs);
    out.stiffness.resize(kDofs, kDofs);
    for (int i = 0; i < kDofs; ++i) {
      out.residual(i) = r(i).value();
      out.stiffness.row(i) = r(i).derivatives().transpose();
    }
    return out;
  }

  void commit(std::vector<Node>& nodes, const EvalContext& ctx) override {
    if (ctx.dynamics == nullptr || !dyn_.active()) return;
    const Dofs<double> x = values(nodes);
    const GeodesicInterpolation<double> field(x.triads, three_point_basis());
    for (std::size_t g = 0; g < gps_.size(); ++g)
      dyn_.states[g] = update_kinematics(*ctx.dynamics, dyn_.states[g], combine<double>(x, gps_[g].h),
                                         field.eval(gps_[g].l, gps_[g].l_s, false).lambda);
  }

  void init_dynamics(const std::vector<Node>& nodes) override {
    const Dofs<double> x = values(nodes);
    const GeodesicInterpolation<double> field(x.triads, three_point_basis());
    dyn_.states.assign(gps_.size(), PointDynState{});
    for (std::size_t g = 0; g < gps_.size(); ++g) {
      dyn_.states[g].r = combine<double>(x, gps_[g].h);
      dyn_.states[g].lambda = field.eval(gps_[g].l, gps_[g].l_s, false).lambda;
    }
  }

  Momenta momenta() const override {
    Momenta out;
    for (std::size_t g = 0; g < dyn_.states.size(); ++g) {
      const PointDynState& s = dyn_.states[g];
      const double wj = gps_[g].weight * gps_[g].J;
      const Vector3d p = section_.rhoA * s.v;
      const Vector3d c_w = section_.C_rho().cwiseProduct(s.W);
      out.linear += wj * p;
      out.angular += wj * (s.r.cross(p) + s.lambda * c_w);
      out.kinetic += 0.5 * wj * (p.dot(s.v) + s.W.dot(c_w));
    }
    return out;
  }

  Vector3d position(const std::vector<Node>& nodes, double xi) const override {
    return combine<double>(values(nodes), make_point(xi, 0.0).h);
  }

  Matrix3d triad(const std::vector<Node>& nodes, double xi) const override {
    const HermitePoint p = make_point(xi, 0.0);
    return GeodesicInterpolation<double>(values(nodes).triads, three_point_basis())
        .eval(p.l, p.l_s, false)
        .lambda;
  }

  Vector3d initial_position(double xi) const override { return initial().position(xi); }
  double jacobian(double xi) const override { return initial().jacobian(xi); }
  double length() const override { return c_; }

 private:
  template <class T>
  struct Dofs {
    std::array<Vec3<T>, 2> d, t;
    std::vector<Mat3<T>> triads = std::vector<Mat3<T>>(3);
  };

  HermiteCenterline initial() const {
    return HermiteCenterline::initial(d0_[0], t0_[0], d0_[1], t0_[1], c_);
  }

  HermitePoint make_point(double xi, double weight) const {
    HermitePoint p;
    p.weight = weight;
    p.J = initial().jacobian(xi);
    if (!(p.J > 0.0)) throw DegenerateGeometry("hsr element: vanishing Jacobian");
    const Eigen::Vector4d scale(1.0, 0.5 * c_, 1.0, 0.5 * c_);
    p.h = HermiteBasis::values(xi).cwiseProduct(scale);
    p.h_s = HermiteBasis::first(xi).cwiseProduct(scale) / p.J;
    p.l = three_point_basis().values(xi);
    p.l_s = three_point_basis().first(xi) / p.J;
    return p;
  }

  Dofs<double> values(const std::vector<Node>& nodes) const {
    Dofs<double> x;
    for (int b = 0; b < 2; ++b) {
      x.d[b] = nodes[nodes_[b]].d;
      x.t[b] = nodes[nodes_[b]].t;
    }
    for (int i = 0; i < 3; ++i) x.triads[i] = nodes[nodes_[i]].triad;
    return x;
  }

  template <class T>
  static Vec3<T> combine(const Dofs<T>& x, const Eigen::Vector4d& h) {
    return h(0) * x.d[0] + h(1) * x.t[0] + h(2) * x.d[1] + h(3) * x.t[1];
  }

  template <class T>
  static void add_hermite(VecH<T>& r, const Eigen::Vector4d& h, const Vec3<T>& f) {
    for (int b = 0; b < 2; ++b) {
      r.template segment<3>(kD[b]) += h(2 * b) * f;
      r.template segment<3>(kT[b]) += h(2 * b + 1) * f;
    }
  }

  template <class T>
  VecH<T> residual(const Dofs<T>& x, const EvalContext& ctx, T& energy) const {
    const GeodesicInterpolation<T> field(x.triads, three_point_basis());
    VecH<T> r = VecH<T>::Zero();
    energy = T(0.0);

    std::array<Vec3<T>, 3> r1_cp, gamma_cp, force_cp;
    for (int c = 0; c < 3; ++c) {
      r1_cp[c] = combine<T>(x, cps_[c].h_s);
      gamma_cp[c] = x.triads[c].transpose() * r1_cp[c] - gamma0_[c].cast<T>();
      force_cp[c].setZero();
    }

    const Vector3d c_f = section_.C_F(), c_m = section_.C_M();
    for (std::size_t g = 0; g < gps_.size(); ++g) {
      const HermitePoint& p = gps_[g];
      const auto tri = field.eval(p.l, p.l_s, false);
      const Vec3<T> gamma = p.l(0) * gamma_cp[0] + p.l(1) * gamma_cp[1] + p.l(2) * gamma_cp[2];
      const Vec3<T> omega = tri.K - k0_[g].cast<T>();
      const Vec3<T> f_mat = c_f.cast<T>().cwiseProduct(gamma);
      const Vec3<T> m_mat = c_m.cast<T>().cwiseProduct(omega);
      const Vec3<T> m = tri.lambda * m_mat;
      const double wj = p.weight * p.J;
      for (int i = 0; i < 3; ++i) {
        r.template segment<3>(kTheta[i]) += (wj * p.l_s(i)) * m;
        force_cp[i] += (wj * p.l(i)) * f_mat;
      }
      energy += (0.5 * wj) * (gamma.dot(f_mat) + omega.dot(m_mat));
    }
    // Re-interpolated strains vary only through their collocation values.
    for (int c = 0; c < 3; ++c) {
      const Vec3<T> f = x.triads[c] * force_cp[c];
      add_hermite<T>(r, cps_[c].h_s, f);
      r.template segment<3>(kTheta[c]) -= r1_cp[c].cross(f);
    }

    if (ctx.dynamics != nullptr && dyn_.active()) {
      for (std::size_t g = 0; g < gps_.size(); ++g) {
        const HermitePoint& p = gps_[g];
        const Mat3<T> lambda = field.eval(p.l, p.l_s, false).lambda;
        const PointRates<T> rates =
            point_rates<T>(*ctx.dynamics, dyn_.states[g], combine<T>(x, p.h), lambda);
        const Vec3<T> m = inertia_moment<T>(lambda, rates.W, rates.A, section_.C_rho());
        const double wj = p.weight * p.J;
        add_hermite<T>(r, wj * p.h, Vec3<T>(section_.rhoA * rates.a));
        for (int i = 0; i < 3; ++i) r.template segment<3>(kTheta[i]) += (wj * p.l(i)) * m;
      }
    }
    return r;
  }

  SectionProperties section_;
  std::array<Vector3d, 2> d0_, t0_;
  double c_ = 1.0;
  std::vector<HermitePoint> gps_;
  std::array<HermitePoint, 3> cps_;
  std::array<Vector3d, 3> gamma0_;
  std::vector<Vector3d> k0_;
  DynamicPoints dyn_;
};

}  // namespace

ElementPtr make_hsr_element(std::array<int, 3> nodes, const HermiteElementGeometry& geometry,
                            const SectionProperties& section, std::vector<Node>& node_store) {
  return std::make_unique<HSRElement>(nodes, geometry, section, node_store);
}

}  // namespace gebeam
