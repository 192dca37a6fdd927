#include <numbers>

#include "attestpo/errors.hpp"
#include "support.hpp"

using namespace attestpo;
using namespace attestpo::testing;

namespace {

// q1 ∘ q2 written out component by component
Quaternion hamilton(const Quaternion& a, const Quaternion& b) {
  const double w1 = a.s, x1 = a.eta(0), y1 = a.eta(1), z1 = a.eta(2);
  const double w2 = b.s, x2 = b.eta(0), y2 = b.eta(1), z2 = b.eta(2);
  return {w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2, w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
          w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2, w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2};
}

}  // namespace

TEST(QuatMul, IdentityIsNeutral) {
  std::mt19937_64 rng(1);
  const Quaternion q = random_unit_quat(rng);
  EXPECT_LT(max_abs_diff(quat_mul(q, Quaternion::identity()).coeffs(), q.coeffs()), 1e-15);
}

TEST(QuatMul, ISquaredIsMinusOne) {
  const Quaternion i(0, 1, 0, 0);
  EXPECT_LT(max_abs_diff(quat_mul(i, i).coeffs(), Vec4(-1, 0, 0, 0)), 1e-15);
}

TEST(QuatMul, MatchesComponentFormAndBothMatrixForms) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 50; ++k) {
    const Quaternion a = random_unit_quat(rng), b = random_unit_quat(rng);
    const Vec4 expect = hamilton(a, b).coeffs();
    EXPECT_LT(max_abs_diff(quat_mul(a, b).coeffs(), expect), 1e-14);
    EXPECT_LT(max_abs_diff(quat_left_matrix(a) * b.coeffs(), expect), 1e-14);
    EXPECT_LT(max_abs_diff(quat_right_matrix(b) * a.coeffs(), expect), 1e-14);
  }
}

TEST(QuatMul, Associative) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const Quaternion a = random_unit_quat(rng), b = random_unit_quat(rng), c = random_unit_quat(rng);
    EXPECT_LT(max_abs_diff(quat_mul(quat_mul(a, b), c).coeffs(), quat_mul(a, quat_mul(b, c)).coeffs()), 1e-12);
  }
}

TEST(QuatConj, Examples) {
  EXPECT_EQ(quat_conj(Quaternion::identity()).coeffs(), Vec4(1, 0, 0, 0));
  EXPECT_EQ(quat_conj(Quaternion(0, 1, 0, 0)).coeffs(), Vec4(0, -1, 0, 0));
  std::mt19937_64 rng(4);
  const Quaternion q = random_unit_quat(rng);
  EXPECT_LT(max_abs_diff(quat_mul(q, quat_conj(q)).coeffs(), Vec4(1, 0, 0, 0)), 1e-12);
  const Quaternion p(1.0, 2.0, -1.0, 0.5);
  EXPECT_LT(max_abs_diff(quat_mul(p, quat_conj(p)).coeffs(), Vec4(p.coeffs().squaredNorm(), 0, 0, 0)), 1e-12);
}

TEST(Normalize, UnitAndRejectsZero) {
  EXPECT_NEAR(normalize(Quaternion(3, 1, -2, 7)).norm(), 1.0, 1e-15);
  EXPECT_THROW(normalize(Quaternion(0, 0, 0, 0)), DomainError);
  EXPECT_GE(canonical(Quaternion(-0.5, 0.5, 0.5, 0.5)).s, 0.0);
}

TEST(RotateVector, Identity) {
  EXPECT_LT(max_abs_diff(rotate_vector(Quaternion::identity(), Vec3(1, 2, 3)), Vec3(1, 2, 3)), 1e-15);
}

TEST(RotateVector, QuarterTurnAboutThirdAxisByHand) {
  // q = [c, 0, 0, c], c = √2/2: q*∘[0,1,0,0]∘q = [0, 0, −1, 0]
  const double c = std::sqrt(0.5);
  const Quaternion q(c, 0, 0, c);
  const Quaternion by_hand = hamilton(hamilton(quat_conj(q), Quaternion(0, 1, 0, 0)), q);
  EXPECT_LT(max_abs_diff(by_hand.coeffs(), Vec4(0, 0, -1, 0)), 1e-15);
  EXPECT_LT(max_abs_diff(rotate_vector(q, Vec3(1, 0, 0)), Vec3(0, -1, 0)), 1e-15);
  EXPECT_LT(max_abs_diff(quat_to_rotmat(q) * Vec3(1, 0, 0), Vec3(0, -1, 0)), 1e-15);
}

TEST(RotateVector, PreservesNormAndMatchesMatrix) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    const Quaternion q = random_unit_quat(rng);
    const Vec3 v = random_vec(rng, 3.0);
    EXPECT_NEAR(rotate_vector(q, v).norm(), v.norm(), 1e-12);
    EXPECT_LT(max_abs_diff(rotate_vector(q, v), quat_to_rotmat(q) * v), 1e-12);
  }
}

TEST(QuatToRotmat, Properties) {
  EXPECT_LT(max_abs_diff(quat_to_rotmat(Quaternion::identity()), Mat3::Identity()), 1e-15);
  std::mt19937_64 rng(6);
  for (int k = 0; k < 50; ++k) {
    const Quaternion q = random_unit_quat(rng);
    const Mat3 c = quat_to_rotmat(q);
    EXPECT_LT(max_abs_diff(c, quat_to_rotmat(-q)), 1e-15);
    EXPECT_LT(max_abs_diff(c.transpose() * c, Mat3::Identity()), 1e-12);
    EXPECT_NEAR(c.determinant(), 1.0, 1e-12);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(c.col(j).norm(), 1.0, 1e-12);
  }
}

TEST(QuatToRotmat, CompositionOrder) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    const Quaternion a = random_unit_quat(rng), b = random_unit_quat(rng);
    EXPECT_LT(max_abs_diff(quat_to_rotmat(quat_mul(a, b)), quat_to_rotmat(b) * quat_to_rotmat(a)), 1e-12);
  }
}

TEST(RotmatToQuat, RoundTrip) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 100; ++k) {
    const Quaternion q = random_unit_quat(rng);
    EXPECT_LT(quat_distance(rotmat_to_quat(quat_to_rotmat(q)), q), 1e-12);
  }
}

TEST(Rodrigues, ToQuatExamples) {
  EXPECT_LT(max_abs_diff(rodrigues_to_quat(Vec3::Zero()).coeffs(), Vec4(1, 0, 0, 0)), 1e-15);
  const double c = std::sqrt(0.5);
  EXPECT_LT(max_abs_diff(rodrigues_to_quat(Vec3(2, 0, 0)).coeffs(), Vec4(c, c, 0, 0)), 1e-15);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 50; ++k) EXPECT_NEAR(rodrigues_to_quat(random_vec(rng, 10.0)).norm(), 1.0, 1e-14);
}

TEST(Rodrigues, FromQuatExamples) {
  EXPECT_LT(max_abs_diff(quat_to_rodrigues(Quaternion::identity()), Vec3::Zero()), 1e-15);
  const double c = std::sqrt(0.5);
  EXPECT_LT(max_abs_diff(quat_to_rodrigues(Quaternion(c, c, 0, 0)), Vec3(2, 0, 0)), 1e-14);
  EXPECT_THROW(quat_to_rodrigues(Quaternion(1e-7, 1, 0, 0)), SingularRotation);
  EXPECT_THROW(quat_to_rodrigues(Quaternion(kRodriguesSingularity, 1, 0, 0)), SingularRotation);
}

TEST(Rodrigues, RoundTripUpToGuard) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> mag(0.0, 100.0);
  for (int k = 0; k < 200; ++k) {
    const Vec3 g = random_vec(rng).normalized() * mag(rng);
    EXPECT_LT((quat_to_rodrigues(rodrigues_to_quat(g)) - g).norm(), 1e-12 * std::max(1.0, g.squaredNorm()));
  }
  const Vec3 g(0.3, -0.2, 0.1);
  EXPECT_LT((quat_to_rodrigues(rodrigues_to_quat(g)) - g).norm(), 1e-12);
}

TEST(Rodrigues, ToRotmatIsComposition) {
  for (const Vec3& g : {Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0.4, -1.5, 3.0)}) {
    EXPECT_LT(max_abs_diff(rodrigues_to_rotmat(g), quat_to_rotmat(rodrigues_to_quat(g))), 1e-14);
  }
}

TEST(AttitudeError, Examples) {
  std::mt19937_64 rng(11);
  const Quaternion q = random_unit_quat(rng);
  EXPECT_LT(attitude_error(q, q).norm(), 1e-15);

  const double theta = 1e-3;
  const Quaternion rot(std::cos(theta / 2), std::sin(theta / 2), 0, 0);
  const Quaternion est = quat_mul(rot, q);
  const Vec3 e = attitude_error(q, est);
  EXPECT_NEAR(e.norm(), 2.0 * std::sin(theta / 2), 1e-15);
  EXPECT_NEAR(e.norm(), theta, 1e-9);
  EXPECT_NEAR(e(0), -theta, 1e-9);
  EXPECT_LT(max_abs_diff(attitude_error(q, -est), -e), 1e-15);
}

TEST(RotationVector, SmallAndLarge) {
  EXPECT_LT(max_abs_diff(rotation_vector_to_quat(Vec3::Zero()).coeffs(), Vec4(1, 0, 0, 0)), 1e-15);
  const Quaternion q = rotation_vector_to_quat(Vec3(0, 0, std::numbers::pi / 2));
  EXPECT_LT(max_abs_diff(q.coeffs(), Vec4(std::sqrt(0.5), 0, 0, std::sqrt(0.5))), 1e-15);
}

TEST(Euler, RoundTripAndAxes) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.4, 1.4);
  for (int k = 0; k < 100; ++k) {
    const EulerAngles e{u(rng), 2.0 * u(rng), u(rng)};
    const EulerAngles back = quat_to_euler(euler_to_quat(e));
    EXPECT_NEAR(back.roll, e.roll, 1e-12);
    EXPECT_NEAR(back.yaw, e.yaw, 1e-12);
    EXPECT_NEAR(back.pitch, e.pitch, 1e-12);
  }
  // pure yaw rotates the body about the Up axis: C_b^n = R_y(yaw)
  const double yaw = 0.3;
  const Mat3 c_bn = quat_to_rotmat(euler_to_quat({0.0, yaw, 0.0})).transpose();
  EXPECT_LT(max_abs_diff(c_bn, Eigen::AngleAxisd(yaw, Vec3::UnitY()).toRotationMatrix()), 1e-15);
}

TEST(WrapPi, Range) {
  EXPECT_NEAR(wrap_pi(3 * std::numbers::pi / 2), -std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(wrap_pi(-3 * std::numbers::pi / 2), std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(wrap_pi(0.25), 0.25, 1e-15);
}
