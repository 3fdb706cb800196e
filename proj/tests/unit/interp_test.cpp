#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gebeam/interp.hpp"

namespace gebeam {
namespace {

TEST(Lagrange, PartitionOfUnityAndKronecker) {
  for (int n = 2; n <= 6; ++n) {
    const LagrangeBasis b = LagrangeBasis::equidistant(n);
    EXPECT_DOUBLE_EQ(b.nodes()[0], -1.0);
    EXPECT_DOUBLE_EQ(b.nodes()[1], 1.0);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd v = b.values(b.nodes()[i]);
      for (int j = 0; j < n; ++j) EXPECT_NEAR(v(j), i == j ? 1.0 : 0.0, 1e-14);
    }
    for (double xi : {-0.7, 0.1, 0.55}) {
      EXPECT_NEAR(b.values(xi).sum(), 1.0, 1e-14);
      EXPECT_NEAR(b.first(xi).sum(), 0.0, 1e-13);
      EXPECT_NEAR(b.second(xi).sum(), 0.0, 1e-12);
    }
  }
}

TEST(Lagrange, DerivativesMatchFiniteDifferences) {
  const LagrangeBasis b = LagrangeBasis::equidistant(5);
  const double h = 1e-6, xi = 0.3;
  EXPECT_LT((b.first(xi) - (b.values(xi + h) - b.values(xi - h)) / (2 * h)).norm(), 1e-8);
  EXPECT_LT((b.second(xi) - (b.first(xi + h) - b.first(xi - h)) / (2 * h)).norm(), 1e-7);
}

TEST(Hermite, ReproducesCubics) {
  // p(x) = 1 - 2x + 0.5x^2 + 0.25x^3 on [-1, 1]
  auto p = [](double x) { return 1.0 - 2.0 * x + 0.5 * x * x + 0.25 * x * x * x; };
  auto dp = [](double x) { return -2.0 + x + 0.75 * x * x; };
  const Eigen::Vector4d nodal(p(-1.0), dp(-1.0), p(1.0), dp(1.0));
  for (double xi : {-1.0, -0.3, 0.0, 0.8, 1.0}) EXPECT_NEAR(HermiteBasis::values(xi).dot(nodal), p(xi), 1e-14);
  EXPECT_NEAR(HermiteBasis::first(0.4).dot(nodal), dp(0.4), 1e-14);
}

TEST(Hermite, ElementLengthIsAFixedPointOfTheArcLength) {
  // Quarter circle of radius 2 between its end points.
  const double r = 2.0;
  const Vector3d d1(r, 0, 0), t1(0, 1, 0), d2(0, r, 0), t2(-1, 0, 0);
  const double c = element_length_fixpoint(d1, t1, d2, t2);
  EXPECT_NEAR(hermite_arc_length(d1, t1, d2, t2, c), c, 1e-10);
  // The cubic is not a circle; its length is close to the arc length only.
  EXPECT_NEAR(c, 0.5 * M_PI * r, 0.02 * M_PI * r);
}

TEST(Hermite, StraightLineHasUnitJacobianRatio) {
  const HermiteCenterline cl = HermiteCenterline::initial(Vector3d::Zero(), Vector3d::UnitX(),
                                                          Vector3d(4, 0, 0), Vector3d::UnitX(), 4.0);
  for (double xi : {-1.0, 0.2, 1.0}) {
    EXPECT_NEAR(cl.jacobian(xi), 2.0, 1e-14);
    const CenterlinePoint p = hermite_eval(cl, xi);
    EXPECT_NEAR(p.r1.norm(), 1.0, 1e-14);
    EXPECT_NEAR(p.r2.norm(), 0.0, 1e-14);
  }
}

Matrix3d circle_triad(double kappa, double s) { return so3::exp_map<double>(Vector3d(0, 0, kappa * s)); }

TEST(Geodesic, ConstantCurvatureIsExact) {
  const double kappa = 0.4, len = 3.0;
  for (int n = 2; n <= 5; ++n) {
    const LagrangeBasis b = LagrangeBasis::equidistant(n);
    std::vector<Matrix3d> nodal;
    for (double xi : b.nodes()) nodal.push_back(circle_triad(kappa, 0.5 * len * (xi + 1.0)));
    const GeodesicTriadField f(nodal, 0.5 * len);
    for (double xi : {-0.9, -0.1, 0.6}) {
      const TriadPoint p = geodesic_triad_eval(f, xi);
      EXPECT_LT((p.lambda - circle_triad(kappa, 0.5 * len * (xi + 1.0))).norm(), 1e-13);
      EXPECT_LT((p.curvature - Vector3d(0, 0, kappa)).norm(), 1e-13);
    }
  }
}

TEST(Geodesic, ShapeMatricesMapNodalSpinsToTheField) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  const LagrangeBasis b = LagrangeBasis::equidistant(4);
  std::vector<Matrix3d> nodal;
  for (int i = 0; i < 4; ++i) nodal.push_back(so3::exp_map<double>(Vector3d(u(rng), u(rng), u(rng))));
  const double xi = 0.35, h = 1e-6;
  const ShapeMatrices sm = generalized_shape_matrices(GeodesicTriadField(nodal, 1.0), xi);
  for (int i = 0; i < 4; ++i) {
    const Vector3d spin(u(rng), u(rng), u(rng));
    auto field = [&](double eps) {
      std::vector<Matrix3d> moved = nodal;
      moved[i] = so3::exp_map<double>(Vector3d(eps * spin)) * nodal[i];
      return geodesic_triad_eval(GeodesicTriadField(moved, 1.0), xi).lambda;
    };
    const Matrix3d base = geodesic_triad_eval(GeodesicTriadField(nodal, 1.0), xi).lambda;
    const Vector3d fd = (so3::log_map<double>(Matrix3d(field(h) * base.transpose())) -
                         so3::log_map<double>(Matrix3d(field(-h) * base.transpose()))) /
                        (2 * h);
    EXPECT_LT((fd - sm.I[i] * spin).norm(), 1e-8) << "node " << i;
  }
}

TEST(Geodesic, RejectsRotationsBeyondHalfTurn) {
  // The end node sits half a turn away from the middle reference.
  std::vector<Matrix3d> nodal{so3::exp_map<double>(Vector3d(0, 0, M_PI)), Matrix3d::Identity(),
                              Matrix3d::Identity()};
  EXPECT_THROW(geodesic_triad_eval(GeodesicTriadField(nodal, 1.0), 0.0), RotationRangeError);
}

TEST(SmallestRotationField, FirstAxisFollowsTheTangent) {
  SRTriadField f;
  f.centerline = HermiteCenterline::initial(Vector3d::Zero(), Vector3d(1, 0.2, 0).normalized(),
                                            Vector3d(1, 0.4, 0.2), Vector3d(0.6, 0.7, 0.3).normalized(), 1.2);
  for (int k = 0; k < 3; ++k) {
    const double xi = k == 0 ? -1.0 : k == 1 ? 1.0 : 0.0;
    const Vector3d g1 = hermite_eval(f.centerline, xi).r1.normalized();
    f.triads[k] = so3::rotate_about_first<double>(so3::smallest_rotation<double>(Matrix3d::Identity(), g1), 0.1 * k);
  }
  for (double xi : {-1.0, -0.5, 0.3, 1.0}) {
    const TriadPoint p = sr_triad_eval(f, xi);
    EXPECT_LT((p.lambda.col(0) - hermite_eval(f.centerline, xi).r1.normalized()).norm(), 1e-12);
    EXPECT_LT((p.lambda.transpose() * p.lambda - Matrix3d::Identity()).norm(), 1e-13);
  }
}

TEST(Quadrature, GaussRulesIntegratePolynomialsExactly) {
  for (int n = 1; n <= 10; ++n) {
    const GaussRule& g = gauss_legendre(n);
    const int degree = 2 * n - 1;
    double sum = 0.0;
    for (int k = 0; k < g.size(); ++k) sum += g.weights[k] * std::pow(g.points[k], degree - 1);
    const double exact = (degree - 1) % 2 == 0 ? 2.0 / degree : 0.0;
    EXPECT_NEAR(sum, exact, 1e-14) << "n = " << n;
  }
}

}  // namespace
}  // namespace gebeam
