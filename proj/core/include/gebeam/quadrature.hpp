#pragma once

#include <vector>

namespace gebeam {

struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

// Gauss-Legendre rule on [-1, 1], exact for polynomials up to degree 2n - 1.
const GaussRule& gauss_legendre(int n);

}  // namespace gebeam
