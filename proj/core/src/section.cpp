#include "gebeam/section.hpp"

#include "gebeam/errors.hpp"
#include "gebeam/interp.hpp"

namespace gebeam {

void SectionProperties::validate() const {
  if (!(EA > 0 && GA2 > 0 && GA3 > 0 && GIT > 0 && EI2 > 0 && EI3 > 0))
    throw Error("section: stiffness values must be positive");
  if (rhoA < 0 || rhoI2 < 0 || rhoI3 < 0 || rhoIP < 0)
    throw Error("section: inertia values must be non-negative");
}

SectionProperties SectionProperties::standard(double zeta, double length) {
  const double side = length / zeta;
  const double A = side * side;
  const double I = A * A / 12.0;
  SectionProperties s;
  s.EA = A;
  s.GA2 = s.GA3 = 0.5 * A;
  s.EI2 = s.EI3 = I;
  s.GIT = 0.5 * A * A / 6.0;
  s.rhoA = A;
  s.rhoI2 = s.rhoI3 = I;
  s.rhoIP = 2.0 * I;
  return s;
}

SectionProperties SectionProperties::rectangle(double E, double G, double b, double h,
                                               double I_T, double rho) {
  SectionProperties s;
  const double A = b * h;
  s.EA = E * A;
  s.GA2 = s.GA3 = G * A;
  s.GIT = G * I_T;
  s.EI2 = E * b * h * h * h / 12.0;
  s.EI3 = E * h * b * b * b / 12.0;
  s.rhoA = rho * A;
  s.rhoI2 = rho * b * h * h * h / 12.0;
  s.rhoI3 = rho * h * b * b * b / 12.0;
  s.rhoIP = s.rhoI2 + s.rhoI3;
  return s;
}

ReissnerStrains reissner_strains(const Matrix3d& lambda, const Vector3d& r_prime,
                                 const Vector3d& curvature, const Matrix3d& lambda0,
                                 const Vector3d& r0_prime, const Vector3d& curvature0) {
  return {lambda.transpose() * r_prime - lambda0.transpose() * r0_prime, curvature - curvature0};
}

double kirchhoff_axial(const Vector3d& r_prime) {
  const double n = r_prime.norm();
  if (!(n > 0.0)) throw DegenerateGeometry("axial strain: zero tangent");
  return n - 1.0;
}

double mcs_axial(const Eigen::Vector3d& eps_cp, double xi) {
  return three_point_basis().values(xi).dot(eps_cp);
}

Resultants constitutive(const ReissnerStrains& strains, const SectionProperties& section) {
  Resultants out;
  out.F = section.C_F().cwiseProduct(strains.gamma);
  out.M = section.C_M().cwiseProduct(strains.omega);
  out.energy = 0.5 * (strains.gamma.dot(out.F) + strains.omega.dot(out.M));
  return out;
}

Resultants constitutive_kirchhoff(double eps_bar, const Vector3d& omega,
                                  const SectionProperties& section) {
  Resultants out;
  out.F = Vector3d(section.EA * eps_bar, 0.0, 0.0);
  out.M = section.C_M().cwiseProduct(omega);
  out.energy = 0.5 * (section.EA * eps_bar * eps_bar + omega.dot(out.M));
  return out;
}

InertiaForces inertia_terms(const Vector3d& r_ddot, const Vector3d& W, const Vector3d& A,
                            const Matrix3d& lambda, const SectionProperties& section) {
  return {-section.rhoA * r_ddot, -inertia_moment<double>(lambda, W, A, section.C_rho())};
}

}  // namespace gebeam
