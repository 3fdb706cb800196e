#include "gebeam/reference.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "gebeam/errors.hpp"
#include "gebeam/quadrature.hpp"

namespace gebeam {

namespace {

std::vector<int> elements_by_arc_length(const Model& model) {
  std::vector<int> order(model.element_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return model.element(a).s_start() < model.element(b).s_start();
  });
  return order;
}

}  // namespace

Centerline model_centerline(const Model& model) {
  auto snapshot = std::make_shared<const Model>(model);
  auto order = std::make_shared<const std::vector<int>>(elements_by_arc_length(model));
  if (order->empty()) throw Error("centerline: model has no elements");
  return [snapshot, order](double s) -> Vector3d {
    const Model& m = *snapshot;
    // Last element whose start does not exceed s.
    auto it = std::upper_bound(order->begin(), order->end(), s, [&](double value, int e) {
      return value < m.element(e).s_start();
    });
    const int e = it == order->begin() ? order->front() : *std::prev(it);
    const Element& el = m.element(e);
    return el.position(m.nodes(), el.xi_at(std::clamp(s, el.s_start(), el.s_start() + el.length())));
  };
}

double max_displacement(const Centerline& deformed, const Centerline& initial, double length,
                        int samples) {
  double u = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double s = length * k / (samples - 1);
    u = std::max(u, (deformed(s) - initial(s)).norm());
  }
  return u;
}

double l2_error(const Model& model, const Centerline& reference, double u_max, double length,
                const std::optional<ArcWindow>& window) {
  if (!(u_max > 0.0)) throw Error("l2 error: maximal displacement must be positive");
  double total = 0.0;
  for (int e = 0; e < model.element_count(); ++e) total += model.element(e).length();
  if (std::abs(total - length) > 1e-3 * length)
    throw Error("l2 error: discretized length differs from the reference length by more than 0.1%");

  const double a = window ? window->s_begin : 0.0;
  const double b = window ? window->s_end : total;
  if (!(b > a)) throw Error("l2 error: empty arc window");

  const GaussRule& g = gauss_legendre(10);
  double sum = 0.0;
  for (int e = 0; e < model.element_count(); ++e) {
    const Element& el = model.element(e);
    const double s0 = std::max(a, el.s_start());
    const double s1 = std::min(b, el.s_start() + el.length());
    if (s1 <= s0) continue;
    const double half = 0.5 * (s1 - s0);
    for (int k = 0; k < g.size(); ++k) {
      const double s = s0 + half * (g.points[k] + 1.0);
      const Vector3d diff = el.position(model.nodes(), el.xi_at(s)) - reference(s);
      sum += g.weights[k] * half * diff.squaredNorm();
    }
  }
  return std::sqrt(sum / (b - a)) / u_max;
}

double energy_error(double energy, double reference_energy) {
  if (reference_energy == 0.0) throw Error("energy error: reference energy is zero");
  return std::abs(energy - reference_energy) / std::abs(reference_energy);
}

double observed_order(double e1, double e2, double h1, double h2) {
  return std::log(e1 / e2) / std::log(h1 / h2);
}

BalanceAudit conservation_audit(const Model& model, int clamp_node, double time) {
  const Reaction r = model.reaction(clamp_node, time);
  const Vector3d x = model.node(clamp_node).d;
  BalanceAudit audit;
  audit.support.force = -r.force;
  audit.support.moment = -(r.moment + x.cross(r.force));
  audit.applied = model.applied_resultant(time);
  audit.force_gap = (audit.support.force - audit.applied.force).norm();
  audit.moment_gap = (audit.support.moment - audit.applied.moment).norm();
  return audit;
}

}  // namespace gebeam
