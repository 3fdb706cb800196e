#pragma once

#include <stdexcept>
#include <string>

namespace gebeam {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Smallest-rotation map undefined: first base vectors (nearly) antiparallel.
class SingularSR : public Error {
 public:
  using Error::Error;
};

class FirstAxisMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

// A relative rotation reached the boundary of the canonical range.
class RotationRangeError : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace gebeam
