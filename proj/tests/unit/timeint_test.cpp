#include <cmath>

#include <gtest/gtest.h>

#include "gebeam/timeint.hpp"

namespace gebeam {
namespace {

TEST(GenAlpha, ParametersWithoutDissipation) {
  const GenAlphaParams p = derive_params(1.0, 0.1);
  EXPECT_DOUBLE_EQ(p.alpha_m, 0.5);
  EXPECT_DOUBLE_EQ(p.alpha_f, 0.5);
  EXPECT_DOUBLE_EQ(p.gamma, 0.5);
  EXPECT_DOUBLE_EQ(p.beta, 0.25);
}

TEST(GenAlpha, ParametersWithFullDissipation) {
  const GenAlphaParams p = derive_params(0.0, 0.1);
  EXPECT_DOUBLE_EQ(p.alpha_m, -1.0);
  EXPECT_DOUBLE_EQ(p.alpha_f, 0.0);
  EXPECT_DOUBLE_EQ(p.gamma, 1.5);
  EXPECT_DOUBLE_EQ(p.beta, 1.0);
}

TEST(GenAlpha, RejectsInvalidInput) {
  EXPECT_THROW(derive_params(1.5, 0.1), Error);
  EXPECT_THROW(derive_params(0.5, 0.0), Error);
}

// Position increment that makes the new acceleration equal `target`.
Vector3d increment_for(const GenAlphaParams& p, const PointDynState& s, const Vector3d& target) {
  return (target - (p.c_acc_vel() * s.v + p.c_acc_mod() * s.a_mod + p.c_acc_old() * s.a)) / p.c_acc_inc();
}

TEST(GenAlpha, FreeParticleMovesUniformly) {
  const GenAlphaParams p = derive_params(0.8, 0.05);
  PointDynState s;
  s.v = Vector3d(1.0, -2.0, 0.5);
  for (int n = 0; n < 200; ++n) s = update_kinematics(p, s, s.r + increment_for(p, s, Vector3d::Zero()), s.lambda);
  EXPECT_LT((s.r - 10.0 * Vector3d(1.0, -2.0, 0.5)).norm(), 1e-11);
  EXPECT_LT((s.v - Vector3d(1.0, -2.0, 0.5)).norm(), 1e-12);
  EXPECT_LT(s.a.norm(), 1e-12);
}

// x'' + x = 0 from x = 1 at rest; error of x(T) against cos(T).
double oscillator_error(double rho_inf, double dt) {
  const GenAlphaParams p = derive_params(rho_inf, dt);
  PointDynState s;
  s.r = Vector3d(1.0, 0.0, 0.0);
  s.a = s.a_mod = -s.r;
  const int steps = static_cast<int>(std::lround(2.0 / dt));
  for (int n = 0; n < steps; ++n) {
    // a(r) = c_acc_inc (r - r_old) + rest, solve a(r) + r = 0.
    const Vector3d rest = p.c_acc_vel() * s.v + p.c_acc_mod() * s.a_mod + p.c_acc_old() * s.a;
    const Vector3d r = (p.c_acc_inc() * s.r - rest) / (p.c_acc_inc() + 1.0);
    s = update_kinematics(p, s, r, s.lambda);
  }
  return std::abs(s.r.x() - std::cos(2.0));
}

TEST(GenAlpha, OscillatorIsSecondOrderAccurate) {
  for (double rho : {1.0, 0.9, 0.5}) {
    const double e1 = oscillator_error(rho, 0.02);
    const double e2 = oscillator_error(rho, 0.01);
    EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.15) << "rho_inf = " << rho;
  }
}

TEST(GenAlpha, SpinAboutPrincipalAxisIsExact) {
  const GenAlphaParams p = derive_params(0.9, 0.1);
  PointDynState s;
  s.W = Vector3d(0.0, 0.0, 2.0);
  for (int n = 0; n < 50; ++n) {
    // Zero material angular acceleration: increment theta = dt W.
    const Vector3d theta = (-(p.c_acc_vel() * s.W + p.c_acc_mod() * s.A_mod + p.c_acc_old() * s.A)) / p.c_acc_inc();
    s = update_kinematics(p, s, s.r, Matrix3d(s.lambda * so3::exp_map<double>(theta)));
  }
  EXPECT_LT((s.lambda - so3::exp_map<double>(Vector3d(0.0, 0.0, 10.0))).norm(), 1e-12);
  EXPECT_LT((s.W - Vector3d(0.0, 0.0, 2.0)).norm(), 1e-12);
}

// Torque-free asymmetric body: J A + W x J W = 0, solved by Newton on the
// material rotation increment with forward-mode derivatives.
Vector3d spatial_momentum_drift(double dt) {
  using D = Dual<3>;
  const GenAlphaParams p = derive_params(1.0, dt);
  const Vector3d j(1.0, 2.0, 3.0);
  PointDynState s;
  s.W = Vector3d(0.3, 1.0, 0.2);
  s.A = s.A_mod = -j.cwiseInverse().cwiseProduct(s.W.cross(j.cwiseProduct(s.W)));
  const Vector3d pi0 = s.lambda * j.cwiseProduct(s.W);
  const int steps = static_cast<int>(std::lround(4.0 / dt));
  for (int n = 0; n < steps; ++n) {
    Vector3d x = dt * s.W;
    for (int it = 0; it < 20; ++it) {
      Vec3<D> xd;
      seed(xd, Eigen::Vector3d(x));
      const Mat3<D> lambda = s.lambda.cast<D>() * so3::exp_map<D>(xd);
      const PointRates<D> rates = point_rates<D>(p, s, s.r.cast<D>(), lambda);
      const Vec3<D> res = j.cast<D>().cwiseProduct(rates.A) + rates.W.cross(Vec3<D>(j.cast<D>().cwiseProduct(rates.W)));
      Eigen::Matrix3d jac;
      for (int i = 0; i < 3; ++i) jac.row(i) = res(i).derivatives().transpose();
      const Vector3d dx = -jac.lu().solve(values_of(res));
      x += dx;
      if (dx.norm() < 1e-14) break;
    }
    s = update_kinematics(p, s, s.r, Matrix3d(s.lambda * so3::exp_map<double>(x)));
  }
  return s.lambda * j.cwiseProduct(s.W) - pi0;
}

TEST(GenAlpha, TorqueFreeRotationConvergesInAngularMomentum) {
  const double e1 = spatial_momentum_drift(0.02).norm();
  const double e2 = spatial_momentum_drift(0.01).norm();
  EXPECT_LT(e1, 1e-3);
  EXPECT_GT(std::log2(e1 / e2), 1.7);
}

}  // namespace
}  // namespace gebeam
