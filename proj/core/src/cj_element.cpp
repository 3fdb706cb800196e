#include <cmath>

#include "gebeam/element.hpp"
#include "gebeam/errors.hpp"
#include "gebeam/interp.hpp"
#include "gebeam/quadrature.hpp"
#include "gebeam/so3.hpp"

namespace gebeam {
namespace {

template <class T>
using VecX = Eigen::Matrix<T, Eigen::Dynamic, 1>;

struct LagrangePoint {
  double weight = 0.0;
  double J = 1.0;
  Eigen::VectorXd l, l_s;
};

class CJElement final : public Element {
 public:
  CJElement(std::vector<int> nodes, const SectionProperties& section, Locking locking,
            const std::vector<Node>& store)
      : n_(static_cast<int>(nodes.size())),
        basis_(n_ == 3 ? three_point_basis() : LagrangeBasis::equidistant(n_)),
        section_(section) {
    if (n_ < 2 || n_ > 5) throw Unsupported("cj element: 2 to 5 nodes supported");
    section_.validate();
    nodes_ = std::move(nodes);
    std::vector<Matrix3d> triads;
    for (int k : nodes_) {
      d0_.push_back(store.at(k).d);
      triads.push_back(store.at(k).triad);
    }
    const int n_int = locking == Locking::FI ? n_ : n_ - 1;
    const GaussRule& ri = gauss_legendre(n_int);
    for (int g = 0; g < ri.size(); ++g) gp_int_.push_back(make_point(ri.points[g], ri.weights[g]));
    const GaussRule& fi = gauss_legendre(n_);
    for (int g = 0; g < fi.size(); ++g) gp_mass_.push_back(make_point(fi.points[g], fi.weights[g]));
    const GaussRule& g10 = gauss_legendre(10);
    for (int g = 0; g < g10.size(); ++g) length_ += g10.weights[g] * jacobian(g10.points[g]);

    // Offsets so that the initial configuration is stress free.
    const GeodesicInterpolation<double> field(triads, basis_);
    for (const auto& p : gp_int_) {
      const auto t = field.eval(p.l, p.l_s, false);
      gamma0_.push_back(t.lambda.transpose() * tangent<double>(d0_, p));
      k0_.push_back(t.K);
    }
  }

  std::unique_ptr<Element> clone() const override { return std::make_unique<CJElement>(*this); }
  ElementKind kind() const override { return ElementKind::CJ; }

  ElementOutput evaluate(const std::vector<Node>& nodes, const EvalContext& ctx) const override {
    ElementOutput out;
    if (!ctx.stiffness) {
      std::vector<Vector3d> d;
      std::vector<Matrix3d> triads;
      for (int k : nodes_) {
        d.push_back(nodes[k].d);
        triads.push_back(nodes[k].triad);
      }
      out.residual = residual<double>(d, triads, ctx, out.energy);
      return out;
    }
    const int size = 6 * n_;
    std::vector<Vec3<DualX>> d(n_);
    std::vector<Mat3<DualX>> triads(n_);
    for (int k = 0; k < n_; ++k) {
      const Node& node = nodes[nodes_[k]];
      Vec3<DualX> spin;
      for (int c = 0; c < 3; ++c) {
        d[k](c) = DualX(node.d(c), size, 6 * k + c);
        spin(c) = DualX(0.0, size, 6 * k + 3 + c);
      }
      triads[k] = so3::exp_map<DualX>(spin) * node.triad.cast<DualX>();
    }
    DualX energy;
    const VecX<DualX> r = residual<DualX>(d, triads, ctx, energy);
    out.energy = energy.value();
    out.residual.resize(size);
    out.stiffness.setZero(size, size);
    for (int i = 0; i < size; ++i) {
      out.residual(i) = r(i).value();
      if (r(i).derivatives().size() == size) out.stiffness.row(i) = r(i).derivatives().transpose();
    }
    return out;
  }

  void commit(std::vector<Node>& nodes, const EvalContext& ctx) override {
    if (ctx.dynamics == nullptr || !dyn_.active()) return;
    const auto [d, field] = current(nodes);
    for (std::size_t g = 0; g < gp_mass_.size(); ++g) {
      const auto& p = gp_mass_[g];
      dyn_.states[g] = update_kinematics(*ctx.dynamics, dyn_.states[g], position<double>(d, p),
                                         field.eval(p.l, p.l_s, false).lambda);
    }
  }

  void init_dynamics(const std::vector<Node>& nodes) override {
    const auto [d, field] = current(nodes);
    dyn_.states.assign(gp_mass_.size(), PointDynState{});
    for (std::size_t g = 0; g < gp_mass_.size(); ++g) {
      dyn_.states[g].r = position<double>(d, gp_mass_[g]);
      dyn_.states[g].lambda = field.eval(gp_mass_[g].l, gp_mass_[g].l_s, false).lambda;
    }
  }

  Momenta momenta() const override {
    Momenta out;
    for (std::size_t g = 0; g < dyn_.states.size(); ++g) {
      const PointDynState& s = dyn_.states[g];
      const double wj = gp_mass_[g].weight * gp_mass_[g].J;
      const Vector3d p = section_.rhoA * s.v;
      const Vector3d c_w = section_.C_rho().cwiseProduct(s.W);
      out.linear += wj * p;
      out.angular += wj * (s.r.cross(p) + s.lambda * c_w);
      out.kinetic += 0.5 * wj * (p.dot(s.v) + s.W.dot(c_w));
    }
    return out;
  }

  Vector3d position(const std::vector<Node>& nodes, double xi) const override {
    const Eigen::VectorXd l = basis_.values(xi);
    Vector3d r = Vector3d::Zero();
    for (int k = 0; k < n_; ++k) r += l(k) * nodes[nodes_[k]].d;
    return r;
  }

  Matrix3d triad(const std::vector<Node>& nodes, double xi) const override {
    const auto [d, field] = current(nodes);
    const LagrangePoint p = make_point(xi, 0.0);
    return field.eval(p.l, p.l_s, false).lambda;
  }

  Vector3d initial_position(double xi) const override {
    const Eigen::VectorXd l = basis_.values(xi);
    Vector3d r = Vector3d::Zero();
    for (int k = 0; k < n_; ++k) r += l(k) * d0_[k];
    return r;
  }

  double jacobian(double xi) const override {
    const Eigen::VectorXd l = basis_.first(xi);
    Vector3d r = Vector3d::Zero();
    for (int k = 0; k < n_; ++k) r += l(k) * d0_[k];
    return r.norm();
  }

  double length() const override { return length_; }

 private:
  LagrangePoint make_point(double xi, double weight) const {
    LagrangePoint p;
    p.weight = weight;
    p.J = jacobian(xi);
    if (!(p.J > 0.0)) throw DegenerateGeometry("cj element: vanishing Jacobian");
    p.l = basis_.values(xi);
    p.l_s = basis_.first(xi) / p.J;
    return p;
  }

  std::pair<std::vector<Vector3d>, GeodesicInterpolation<double>> current(
      const std::vector<Node>& nodes) const {
    std::vector<Vector3d> d;
    std::vector<Matrix3d> triads;
    for (int k : nodes_) {
      d.push_back(nodes[k].d);
      triads.push_back(nodes[k].triad);
    }
    return {d, GeodesicInterpolation<double>(triads, basis_)};
  }

  template <class T>
  static Vec3<T> position(const std::vector<Vec3<T>>& d, const LagrangePoint& p) {
    Vec3<T> r = Vec3<T>::Zero();
    for (std::size_t k = 0; k < d.size(); ++k) r += p.l(k) * d[k];
    return r;
  }

  template <class T>
  static Vec3<T> tangent(const std::vector<Vec3<T>>& d, const LagrangePoint& p) {
    Vec3<T> r = Vec3<T>::Zero();
    for (std::size_t k = 0; k < d.size(); ++k) r += p.l_s(k) * d[k];
    return r;
  }

  template <class T>
  VecX<T> residual(const std::vector<Vec3<T>>& d, const std::vector<Mat3<T>>& triads,
                   const EvalContext& ctx, T& energy) const {
    const GeodesicInterpolation<T> field(triads, basis_);
    VecX<T> r = VecX<T>::Zero(6 * n_);
    energy = T(0.0);
    const Vector3d c_f = section_.C_F(), c_m = section_.C_M();
    for (std::size_t g = 0; g < gp_int_.size(); ++g) {
      const LagrangePoint& p = gp_int_[g];
      const auto tri = field.eval(p.l, p.l_s, false);
      const Vec3<T> r1 = tangent<T>(d, p);
      const Vec3<T> gamma = tri.lambda.transpose() * r1 - gamma0_[g].cast<T>();
      const Vec3<T> omega = tri.K - k0_[g].cast<T>();
      const Vec3<T> f_mat = c_f.cast<T>().cwiseProduct(gamma);
      const Vec3<T> m_mat = c_m.cast<T>().cwiseProduct(omega);
      const Vec3<T> f = tri.lambda * f_mat;
      const Vec3<T> m = tri.lambda * m_mat;
      const Vec3<T> r1_x_f = r1.cross(f);
      const double wj = p.weight * p.J;
      for (int k = 0; k < n_; ++k) {
        r.template segment<3>(6 * k) += (wj * p.l_s(k)) * f;
        r.template segment<3>(6 * k + 3) += (wj * p.l_s(k)) * m - (wj * p.l(k)) * r1_x_f;
      }
      energy += (0.5 * wj) * (gamma.dot(f_mat) + omega.dot(m_mat));
    }
    if (ctx.dynamics != nullptr && dyn_.active()) {
      for (std::size_t g = 0; g < gp_mass_.size(); ++g) {
        const LagrangePoint& p = gp_mass_[g];
        const Mat3<T> lambda = field.eval(p.l, p.l_s, false).lambda;
        const PointRates<T> rates = point_rates<T>(*ctx.dynamics, dyn_.states[g], position<T>(d, p), lambda);
        const Vec3<T> f = section_.rhoA * rates.a;
        const Vec3<T> m = inertia_moment<T>(lambda, rates.W, rates.A, section_.C_rho());
        const double wj = p.weight * p.J;
        for (int k = 0; k < n_; ++k) {
          r.template segment<3>(6 * k) += (wj * p.l(k)) * f;
          r.template segment<3>(6 * k + 3) += (wj * p.l(k)) * m;
        }
      }
    }
    return r;
  }

  int n_;
  LagrangeBasis basis_;
  SectionProperties section_;
  std::vector<Vector3d> d0_;
  std::vector<LagrangePoint> gp_int_, gp_mass_;
  std::vector<Vector3d> gamma0_, k0_;
  DynamicPoints dyn_;
  double length_ = 0.0;
};

}  // namespace

ElementPtr make_cj_element(std::vector<int> nodes, const SectionProperties& section,
                           Locking locking, const std::vector<Node>& node_store) {
  return std::make_unique<CJElement>(std::move(nodes), section, locking, node_store);
}

}  // namespace gebeam
