#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/AutoDiff>

namespace gebeam {

template <class T>
using Vec3 = Eigen::Matrix<T, 3, 1>;
template <class T>
using Mat3 = Eigen::Matrix<T, 3, 3>;

using Vector3d = Eigen::Vector3d;
using Matrix3d = Eigen::Matrix3d;

// Forward-mode dual number with a fixed number of directions.
template <int N>
using Dual = Eigen::AutoDiffScalar<Eigen::Matrix<double, N, 1>>;

// Dual number with a run-time number of directions (at most 30, no heap use).
using DualX = Eigen::AutoDiffScalar<Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 30, 1>>;

// Dual number whose components are themselves duals; used for second derivatives.
template <int N>
using Dual2 = Eigen::AutoDiffScalar<Eigen::Matrix<Dual<N>, N, 1>>;

inline double value_of(double x) { return x; }

template <class D>
double value_of(const Eigen::AutoDiffScalar<D>& x) {
  return value_of(x.value());
}

template <class Derived>
auto values_of(const Eigen::MatrixBase<Derived>& m) {
  using Out = Eigen::Matrix<double, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  Out out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) = value_of(m(i, j));
  return out;
}

// Lift a double-valued matrix into scalar type T.
template <class T, class Derived>
auto lift(const Eigen::MatrixBase<Derived>& m) {
  return m.template cast<T>();
}

// Seed a dual vector at `values` with unit derivative directions starting at `offset`.
template <class S, int N>
void seed(Eigen::Matrix<S, N, 1>& x, const Eigen::Matrix<double, N, 1>& values) {
  for (int i = 0; i < N; ++i) {
    x(i).value() = values(i);
    x(i).derivatives() = S::DerType::Unit(N, i);
  }
}

}  // namespace gebeam

// Mixed double / nested-dual expressions.
namespace Eigen {
template <typename Inner, int N, typename BinOp>
struct ScalarBinaryOpTraits<AutoDiffScalar<Matrix<AutoDiffScalar<Inner>, N, 1>>, double, BinOp> {
  using ReturnType = AutoDiffScalar<Matrix<AutoDiffScalar<Inner>, N, 1>>;
};
template <typename Inner, int N, typename BinOp>
struct ScalarBinaryOpTraits<double, AutoDiffScalar<Matrix<AutoDiffScalar<Inner>, N, 1>>, BinOp> {
  using ReturnType = AutoDiffScalar<Matrix<AutoDiffScalar<Inner>, N, 1>>;
};
}  // namespace Eigen
