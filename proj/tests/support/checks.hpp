#pragma once

#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "gebeam/element.hpp"

namespace gebeam::testing {

// Single element with its own node store, built on a mildly curved and
// twisted reference geometry of unit size.
struct SampleElement {
  std::string label;
  std::vector<Node> nodes;
  ElementPtr element;
};

struct ElementVariant {
  ElementKind kind;
  Locking locking;
  int cj_nodes = 0;  // CJ only
};

// Lets gtest print a variant by name instead of its bytes.
void PrintTo(const ElementVariant& variant, std::ostream* os);

// Every element family with every locking treatment it supports.
std::vector<ElementVariant> element_variants();
SampleElement make_sample_element(const ElementVariant& variant, double mass = 0.0);

// Perturbs all nodal DOFs by uniform random increments of the given size.
void perturb(SampleElement& sample, std::mt19937_64& rng, double size);

struct GateResult {
  std::string label;
  int states = 0;
  double worst = 0.0;  // largest relative Frobenius deviation
};

// Compares the consistent stiffness with a central-difference Jacobian on
// `states` random configurations. With `dynamic` the inertia terms of a
// generalized-alpha step are included.
GateResult stiffness_gate(const ElementVariant& variant, int states, unsigned seed, bool dynamic);

struct PropertyResult {
  int samples = 0;
  int failures = 0;
  std::string first_failure;
  double seconds = 0.0;
};

// Randomized exponential/logarithm, tangent operator, smallest rotation and
// relative angle checks on the rotation kernel.
PropertyResult so3_property_suite(int samples, unsigned seed);

}  // namespace gebeam::testing
