#include <gtest/gtest.h>

#include "checks.hpp"
#include "gebeam/so3.hpp"

namespace gebeam {
namespace {

TEST(So3, RandomizedPropertySuite) {
  const testing::PropertyResult r = testing::so3_property_suite(10000, 1234u);
  EXPECT_EQ(r.failures, 0) << r.first_failure;
  EXPECT_LT(r.seconds, 5.0);
}

TEST(So3, ExpOfQuarterTurn) {
  const Matrix3d r = so3::exp_map<double>(Vector3d(0.0, 0.0, 0.5 * M_PI));
  EXPECT_NEAR((r * Vector3d::UnitX() - Vector3d::UnitY()).norm(), 0.0, 1e-15);
}

TEST(So3, LogNearHalfTurnStaysOnAxis) {
  const Vector3d axis = Vector3d(1.0, 2.0, -0.5).normalized();
  const Vector3d psi = (M_PI - 1e-9) * axis;
  EXPECT_LT((so3::log_map<double>(so3::exp_map<double>(psi)) - psi).norm(), 1e-7);
}

TEST(So3, SmallestRotationRejectsAntiparallelAxis) {
  EXPECT_THROW(so3::smallest_rotation<double>(Matrix3d::Identity(), Vector3d(-1.0, 0.0, 0.0)), SingularSR);
}

TEST(So3, RelativeAngleNeedsSharedFirstAxis) {
  const Matrix3d tilted = so3::exp_map<double>(Vector3d(0.0, 0.0, 0.1));
  EXPECT_THROW(so3::relative_angle<double>(tilted, Matrix3d::Identity()), FirstAxisMismatch);
}

TEST(So3, TangentTransformsAreMutualInverses) {
  const Vector3d t(1.3, -0.4, 0.7);
  const Vector3d g1_bar = Vector3d(1.0, 0.2, 0.3).normalized();
  const so3::TanTransforms tr = so3::tan_param_transforms(t, g1_bar);
  EXPECT_LT((tr.T_M * tr.T_M_inv - Eigen::Matrix4d::Identity()).norm(), 1e-12);
  EXPECT_LT((tr.T_tilde * tr.T_tilde_inv - Eigen::Matrix4d::Identity()).norm(), 1e-12);
}

TEST(So3, DualNumbersFollowTheDoublePath) {
  using D = Dual<3>;
  Vec3<D> psi;
  seed(psi, Eigen::Vector3d(0.3, -0.2, 0.9));
  const Mat3<D> r = so3::exp_map<D>(psi);
  const Matrix3d plain = so3::exp_map<double>(Vector3d(0.3, -0.2, 0.9));
  EXPECT_LT((values_of(r) - plain).norm(), 1e-15);
  // d exp / d psi_0 against a central difference.
  const double h = 1e-6;
  const Matrix3d fd = (so3::exp_map<double>(Vector3d(0.3 + h, -0.2, 0.9)) -
                       so3::exp_map<double>(Vector3d(0.3 - h, -0.2, 0.9))) /
                      (2.0 * h);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(r(i, j).derivatives()(0), fd(i, j), 1e-8);
}

}  // namespace
}  // namespace gebeam
