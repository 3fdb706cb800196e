#pragma once

#include <Eigen/Core>

#include "gebeam/scalar.hpp"

namespace gebeam {

struct SectionProperties {
  double EA = 1.0;
  double GA2 = 1.0;
  double GA3 = 1.0;
  double GIT = 1.0;
  double EI2 = 1.0;
  double EI3 = 1.0;
  double rhoA = 0.0;
  double rhoI2 = 0.0;
  double rhoI3 = 0.0;
  double rhoIP = 0.0;

  Vector3d C_F() const { return {EA, GA2, GA3}; }
  Vector3d C_M() const { return {GIT, EI2, EI3}; }
  Vector3d C_rho() const { return {rhoIP, rhoI2, rhoI3}; }

  void validate() const;

  // Square section of side l / zeta with E = 1, G = 0.5, unit density and l = 1000.
  static SectionProperties standard(double zeta, double length = 1000.0);
  static SectionProperties rectangle(double E, double G, double b, double h, double I_T,
                                     double rho = 0.0);
};

struct ReissnerStrains {
  Vector3d gamma;
  Vector3d omega;
};

// Gamma = Lambda^T r' - E1 relative to the initial state; Omega = K - K0.
ReissnerStrains reissner_strains(const Matrix3d& lambda, const Vector3d& r_prime,
                                 const Vector3d& curvature, const Matrix3d& lambda0,
                                 const Vector3d& r0_prime, const Vector3d& curvature0);

double kirchhoff_axial(const Vector3d& r_prime);

// Quadratic re-interpolation of axial strain values given at xi = -1, 1, 0.
double mcs_axial(const Eigen::Vector3d& eps_cp, double xi);

struct Resultants {
  Vector3d F;  // material force
  Vector3d M;  // material moment
  double energy = 0.0;
};

Resultants constitutive(const ReissnerStrains& strains, const SectionProperties& section);
Resultants constitutive_kirchhoff(double eps_bar, const Vector3d& omega,
                                  const SectionProperties& section);

struct InertiaForces {
  Vector3d f_rho;  // spatial inertia force per unit length
  Vector3d m_rho;  // spatial inertia moment per unit length
};

InertiaForces inertia_terms(const Vector3d& r_ddot, const Vector3d& W, const Vector3d& A,
                            const Matrix3d& lambda, const SectionProperties& section);

// Inertia moment in spatial form, templated for use inside element residuals.
template <class T>
Vec3<T> inertia_moment(const Mat3<T>& lambda, const Vec3<T>& W, const Vec3<T>& A,
                       const Vector3d& c_rho) {
  const Vec3<T> cw = c_rho.cast<T>().cwiseProduct(W);
  const Vec3<T> ca = c_rho.cast<T>().cwiseProduct(A);
  return lambda * (W.cross(cw) + ca);
}

}  // namespace gebeam
