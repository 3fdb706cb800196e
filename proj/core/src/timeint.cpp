#include "gebeam/timeint.hpp"

#include "gebeam/errors.hpp"

namespace gebeam {

GenAlphaParams derive_params(double rho_inf, double dt) {
  if (rho_inf < 0.0 || rho_inf > 1.0) throw Error("generalized-alpha: rho_inf outside [0, 1]");
  if (!(dt > 0.0)) throw Error("generalized-alpha: time step must be positive");
  GenAlphaParams p;
  p.rho_inf = rho_inf;
  p.dt = dt;
  p.alpha_m = (2.0 * rho_inf - 1.0) / (rho_inf + 1.0);
  p.alpha_f = rho_inf / (rho_inf + 1.0);
  p.gamma = 0.5 + p.alpha_f - p.alpha_m;
  p.beta = 0.25 * (p.gamma + 0.5) * (p.gamma + 0.5);
  return p;
}

GenAlphaParams newmark_params(double beta, double gamma, double dt) {
  GenAlphaParams p;
  p.beta = beta;
  p.gamma = gamma;
  p.alpha_m = 0.0;
  p.alpha_f = 0.0;
  p.dt = dt;
  return p;
}

PointDynState update_kinematics(const GenAlphaParams& p, const PointDynState& old,
                                const Vector3d& r, const Matrix3d& lambda) {
  const PointRates<double> rates = point_rates<double>(p, old, r, lambda);
  PointDynState out;
  out.r = r;
  out.lambda = lambda;
  out.v = rates.v;
  out.a = rates.a;
  out.W = rates.W;
  out.A = rates.A;
  out.a_mod = ((1.0 - p.alpha_f) * rates.a + p.alpha_f * old.a - p.alpha_m * old.a_mod) /
              (1.0 - p.alpha_m);
  out.A_mod = ((1.0 - p.alpha_f) * rates.A + p.alpha_f * old.A - p.alpha_m * old.A_mod) /
              (1.0 - p.alpha_m);
  return out;
}

}  // namespace gebeam
