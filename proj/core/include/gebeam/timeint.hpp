#pragma once

#include <Eigen/Core>

#include "gebeam/so3.hpp"

namespace gebeam {

struct GenAlphaParams {
  double beta = 0.25;
  double gamma = 0.5;
  double alpha_m = 0.5;
  double alpha_f = 0.5;
  double dt = 1.0;
  double rho_inf = 1.0;

  // Coefficients of the update formulas, all for a step of length dt.
  double c_vel_inc() const { return gamma / (beta * dt); }
  double c_vel_old() const { return 1.0 - gamma / beta; }
  double c_vel_mod() const { return dt * (1.0 - 0.5 * gamma / beta); }
  double c_acc_inc() const { return (1.0 - alpha_m) / ((1.0 - alpha_f) * beta * dt * dt); }
  double c_acc_vel() const { return -(1.0 - alpha_m) / ((1.0 - alpha_f) * beta * dt); }
  double c_acc_mod() const {
    return -(1.0 - alpha_m) * (0.5 - beta) / ((1.0 - alpha_f) * beta) + alpha_m / (1.0 - alpha_f);
  }
  double c_acc_old() const { return -alpha_f / (1.0 - alpha_f); }
};

GenAlphaParams derive_params(double rho_inf, double dt);

// Plain Newmark parameters (alpha_m = alpha_f = 0).
GenAlphaParams newmark_params(double beta, double gamma, double dt);

// Kinematic state of one material point (translations and rotations).
struct PointDynState {
  Vector3d r = Vector3d::Zero();
  Vector3d v = Vector3d::Zero();
  Vector3d a = Vector3d::Zero();
  Vector3d a_mod = Vector3d::Zero();
  Matrix3d lambda = Matrix3d::Identity();
  Vector3d W = Vector3d::Zero();
  Vector3d A = Vector3d::Zero();
  Vector3d A_mod = Vector3d::Zero();
};

template <class T>
struct PointRates {
  Vec3<T> v, a, W, A;
};

// Velocities and accelerations at t_{n+1} from the new position and triad.
template <class T>
PointRates<T> point_rates(const GenAlphaParams& p, const PointDynState& old, const Vec3<T>& r,
                          const Mat3<T>& lambda) {
  const Vec3<T> u = r - old.r.cast<T>();
  const Vec3<T> theta = so3::log_map<T>(Mat3<T>(old.lambda.transpose().cast<T>() * lambda));
  if (value_of(theta.norm()) >= M_PI - 1e-10)
    throw RotationRangeError("time step: incremental rotation reached pi");
  auto vel = [&](const Vec3<T>& inc, const Vector3d& v0, const Vector3d& m0) -> Vec3<T> {
    return p.c_vel_inc() * inc + (p.c_vel_old() * v0 + p.c_vel_mod() * m0).cast<T>();
  };
  auto acc = [&](const Vec3<T>& inc, const Vector3d& v0, const Vector3d& a0,
                 const Vector3d& m0) -> Vec3<T> {
    return p.c_acc_inc() * inc +
           (p.c_acc_vel() * v0 + p.c_acc_mod() * m0 + p.c_acc_old() * a0).cast<T>();
  };
  return {vel(u, old.v, old.a_mod), acc(u, old.v, old.a, old.a_mod),
          vel(theta, old.W, old.A_mod), acc(theta, old.W, old.A, old.A_mod)};
}

// Advances a material point to t_{n+1} including the modified accelerations.
PointDynState update_kinematics(const GenAlphaParams& p, const PointDynState& old,
                                const Vector3d& r, const Matrix3d& lambda);

}  // namespace gebeam
