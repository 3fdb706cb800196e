#include "gebeam/interp.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace gebeam {

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  GaussRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.points[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

LagrangeBasis::LagrangeBasis(std::vector<double> nodes) : nodes_(std::move(nodes)) {}

LagrangeBasis LagrangeBasis::equidistant(int n_nodes) {
  if (n_nodes < 2) throw DegenerateGeometry("Lagrange basis needs at least two nodes");
  std::vector<double> nodes{-1.0, 1.0};
  for (int i = 1; i < n_nodes - 1; ++i) nodes.push_back(-1.0 + 2.0 * i / (n_nodes - 1));
  return LagrangeBasis(std::move(nodes));
}

Eigen::VectorXd LagrangeBasis::values(double xi) const {
  const int n = size();
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    double v = 1.0;
    for (int j = 0; j < n; ++j)
      if (j != i) v *= (xi - nodes_[j]) / (nodes_[i] - nodes_[j]);
    out(i) = v;
  }
  return out;
}

Eigen::VectorXd LagrangeBasis::first(double xi) const {
  const int n = size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      double v = 1.0 / (nodes_[i] - nodes_[k]);
      for (int j = 0; j < n; ++j)
        if (j != i && j != k) v *= (xi - nodes_[j]) / (nodes_[i] - nodes_[j]);
      out(i) += v;
    }
  }
  return out;
}

Eigen::VectorXd LagrangeBasis::second(double xi) const {
  const int n = size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      for (int m = 0; m < n; ++m) {
        if (m == i || m == k) continue;
        double v = 1.0 / ((nodes_[i] - nodes_[k]) * (nodes_[i] - nodes_[m]));
        for (int j = 0; j < n; ++j)
          if (j != i && j != k && j != m) v *= (xi - nodes_[j]) / (nodes_[i] - nodes_[j]);
        out(i) += v;
      }
    }
  }
  return out;
}

const LagrangeBasis& three_point_basis() {
  static const LagrangeBasis basis({-1.0, 1.0, 0.0});
  return basis;
}

Eigen::Vector4d HermiteBasis::values(double xi) {
  return {0.25 * (2.0 - 3.0 * xi + xi * xi * xi), 0.25 * (1.0 - xi - xi * xi + xi * xi * xi),
          0.25 * (2.0 + 3.0 * xi - xi * xi * xi), 0.25 * (-1.0 - xi + xi * xi + xi * xi * xi)};
}

Eigen::Vector4d HermiteBasis::first(double xi) {
  return {0.25 * (-3.0 + 3.0 * xi * xi), 0.25 * (-1.0 - 2.0 * xi + 3.0 * xi * xi),
          0.25 * (3.0 - 3.0 * xi * xi), 0.25 * (-1.0 + 2.0 * xi + 3.0 * xi * xi)};
}

Eigen::Vector4d HermiteBasis::second(double xi) {
  return {1.5 * xi, 0.25 * (-2.0 + 6.0 * xi), -1.5 * xi, 0.25 * (2.0 + 6.0 * xi)};
}

namespace {

Vector3d hermite_combine(const Eigen::Vector4d& h, const std::array<Vector3d, 2>& d,
                         const std::array<Vector3d, 2>& t, double c) {
  return h(0) * d[0] + 0.5 * c * h(1) * t[0] + h(2) * d[1] + 0.5 * c * h(3) * t[1];
}

}  // namespace

HermiteCenterline HermiteCenterline::initial(const Vector3d& d1, const Vector3d& t1,
                                             const Vector3d& d2, const Vector3d& t2, double c) {
  HermiteCenterline cl;
  cl.d = {d1, d2};
  cl.t = {t1, t2};
  cl.d0 = cl.d;
  cl.t0 = cl.t;
  cl.c = c;
  return cl;
}

Vector3d HermiteCenterline::position(double xi) const {
  return hermite_combine(HermiteBasis::values(xi), d, t, c);
}

Vector3d HermiteCenterline::derivative_xi(double xi) const {
  return hermite_combine(HermiteBasis::first(xi), d, t, c);
}

double HermiteCenterline::jacobian(double xi) const {
  return hermite_combine(HermiteBasis::first(xi), d0, t0, c).norm();
}

double HermiteCenterline::jacobian_xi(double xi) const {
  const Vector3d r1 = hermite_combine(HermiteBasis::first(xi), d0, t0, c);
  const Vector3d r2 = hermite_combine(HermiteBasis::second(xi), d0, t0, c);
  return r1.dot(r2) / r1.norm();
}

CenterlinePoint hermite_eval(const HermiteCenterline& cl, double xi) {
  const double j = cl.jacobian(xi);
  const double j_xi = cl.jacobian_xi(xi);
  const Vector3d r_xi = cl.derivative_xi(xi);
  const Vector3d r_xixi = hermite_combine(HermiteBasis::second(xi), cl.d, cl.t, cl.c);
  return {cl.position(xi), r_xi / j, (r_xixi - j_xi / j * r_xi) / (j * j)};
}

double hermite_arc_length(const Vector3d& d1, const Vector3d& t1, const Vector3d& d2,
                          const Vector3d& t2, double c, double xi) {
  const GaussRule& g = gauss_legendre(10);
  const double half = 0.5 * (xi + 1.0);
  double len = 0.0;
  for (int k = 0; k < g.size(); ++k) {
    const double x = -1.0 + half * (g.points[k] + 1.0);
    len += g.weights[k] * half * hermite_combine(HermiteBasis::first(x), {d1, d2}, {t1, t2}, c).norm();
  }
  return len;
}

double element_length_fixpoint(const Vector3d& d1, const Vector3d& t1, const Vector3d& d2,
                               const Vector3d& t2) {
  double c = (d2 - d1).norm();
  if (!(c > 0.0)) throw NoConvergence("element length: coincident end points");
  for (int iter = 0; iter < 50; ++iter) {
    const double next = hermite_arc_length(d1, t1, d2, t2, c);
    if (std::abs(next - c) <= 1e-12 * c) return next;
    c = next;
  }
  throw NoConvergence("element length: fixed-point iteration did not converge");
}

const LagrangeBasis& LagrangeCenterline::basis() const {
  static thread_local std::map<int, LagrangeBasis> cache;
  const int n = static_cast<int>(d.size());
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, LagrangeBasis::equidistant(n)).first;
  return it->second;
}

Vector3d LagrangeCenterline::position(double xi) const {
  const Eigen::VectorXd l = basis().values(xi);
  Vector3d r = Vector3d::Zero();
  for (int i = 0; i < l.size(); ++i) r += l(i) * d[i];
  return r;
}

double LagrangeCenterline::jacobian(double xi) const {
  const Eigen::VectorXd l = basis().first(xi);
  Vector3d r = Vector3d::Zero();
  for (int i = 0; i < l.size(); ++i) r += l(i) * d0[i];
  return r.norm();
}

CenterlinePoint lagrange_eval(const LagrangeCenterline& cl, double xi) {
  const LagrangeBasis& b = cl.basis();
  const Eigen::VectorXd l1 = b.first(xi);
  const Eigen::VectorXd l2 = b.second(xi);
  Vector3d r0_xi = Vector3d::Zero(), r0_xixi = Vector3d::Zero();
  Vector3d r_xi = Vector3d::Zero(), r_xixi = Vector3d::Zero();
  for (int i = 0; i < b.size(); ++i) {
    r0_xi += l1(i) * cl.d0[i];
    r0_xixi += l2(i) * cl.d0[i];
    r_xi += l1(i) * cl.d[i];
    r_xixi += l2(i) * cl.d[i];
  }
  const double j = r0_xi.norm();
  const double j_xi = r0_xi.dot(r0_xixi) / j;
  return {cl.position(xi), r_xi / j, (r_xixi - j_xi / j * r_xi) / (j * j)};
}

std::array<int, 2> geodesic_reference_nodes(const LagrangeBasis& basis) {
  // Nodes sorted by coordinate: -1, interior..., +1.
  const int n = basis.size();
  std::vector<int> order{0};
  for (int i = 2; i < n; ++i) order.push_back(i);
  order.push_back(1);
  if (n % 2 == 1) return {order[n / 2], order[n / 2]};
  return {order[n / 2 - 1], order[n / 2]};
}

GeodesicTriadField::GeodesicTriadField(std::vector<Matrix3d> nodal, double ds_dxi)
    : triads(std::move(nodal)),
      basis(triads.size() == 3 ? three_point_basis()
                               : LagrangeBasis::equidistant(static_cast<int>(triads.size()))),
      jacobian(ds_dxi) {}

Matrix3d GeodesicTriadField::reference() const {
  return GeodesicInterpolation<double>(triads, basis).reference();
}

std::vector<Vector3d> GeodesicTriadField::local_rotations() const {
  return GeodesicInterpolation<double>(triads, basis).local_rotations();
}

TriadPoint geodesic_triad_eval(const GeodesicTriadField& f, double xi) {
  const auto p = GeodesicInterpolation<double>(f.triads, f.basis)
                     .eval(f.basis.values(xi), f.basis.first(xi) / f.jacobian, false);
  return {p.lambda, p.K};
}

ShapeMatrices generalized_shape_matrices(const GeodesicTriadField& f, double xi) {
  auto p = GeodesicInterpolation<double>(f.triads, f.basis)
               .eval(f.basis.values(xi), f.basis.first(xi) / f.jacobian, true);
  return {std::move(p.I), std::move(p.I_s)};
}

TriadPoint sr_triad_eval(const SRTriadField& f, double xi) {
  const LagrangeBasis& basis = three_point_basis();
  const Matrix3d& lambda_ref = f.triads[2];
  const Vector3d g1_ref = lambda_ref.col(0);
  std::array<double, 3> phi{};
  for (int i = 0; i < 2; ++i) {
    const Matrix3d m = so3::smallest_rotation<double>(lambda_ref, f.triads[i].col(0));
    phi[i] = so3::relative_angle<double>(f.triads[i], m);
  }
  const CenterlinePoint p = hermite_eval(f.centerline, xi);
  const double j = f.centerline.jacobian(xi);
  const Vector3d g1 = p.r1.normalized();
  const Eigen::VectorXd l = basis.values(xi);
  const Eigen::VectorXd l1 = basis.first(xi) / j;
  double phi_h = 0.0, phi_s = 0.0;
  for (int i = 0; i < 3; ++i) {
    phi_h += l(i) * phi[i];
    phi_s += l1(i) * phi[i];
  }
  const Matrix3d lambda =
      so3::rotate_about_first(so3::smallest_rotation<double>(lambda_ref, g1), phi_h);
  const Vector3d kappa = p.r1.cross(p.r2) / p.r1.squaredNorm();
  const double k_m1 = sr_intermediate_torsion<double>(kappa, g1, g1_ref);
  return {lambda, Vector3d(k_m1 + phi_s, lambda.col(1).dot(kappa), lambda.col(2).dot(kappa))};
}

}  // namespace gebeam
