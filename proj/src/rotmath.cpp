#include "attestpo/rotmath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "attestpo/errors.hpp"

namespace attestpo {

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Mat4 quat_left_matrix(const Quaternion& q) {
  Mat4 m;
  m(0, 0) = q.s;
  m.block<1, 3>(0, 1) = -q.eta.transpose();
  m.block<3, 1>(1, 0) = q.eta;
  m.block<3, 3>(1, 1) = q.s * Mat3::Identity() + skew(q.eta);
  return m;
}

Mat4 quat_right_matrix(const Quaternion& q) {
  Mat4 m;
  m(0, 0) = q.s;
  m.block<1, 3>(0, 1) = -q.eta.transpose();
  m.block<3, 1>(1, 0) = q.eta;
  m.block<3, 3>(1, 1) = q.s * Mat3::Identity() - skew(q.eta);
  return m;
}

Quaternion quat_mul(const Quaternion& q1, const Quaternion& q2) {
  return {q1.s * q2.s - q1.eta.dot(q2.eta),
          q1.s * q2.eta + q2.s * q1.eta + q1.eta.cross(q2.eta)};
}

Quaternion quat_conj(const Quaternion& q) { return {q.s, -q.eta}; }

Quaternion normalize(const Quaternion& q) {
  const double n = q.norm();
  if (!(n > 0.0)) throw DomainError("cannot normalize a zero quaternion");
  return {q.s / n, q.eta / n};
}

Quaternion canonical(const Quaternion& q) { return q.s < 0.0 ? -q : q; }

Vec3 rotate_vector(const Quaternion& q, const Vec3& v) {
  // vector part of q* ∘ [0, v] ∘ q, expanded
  return (q.s * q.s - q.eta.squaredNorm()) * v + 2.0 * q.eta.dot(v) * q.eta +
         2.0 * q.s * v.cross(q.eta);
}

RotationMatrix quat_to_rotmat(const Quaternion& q_in) {
  const Quaternion q = normalize(q_in);
  return (q.s * q.s - q.eta.squaredNorm()) * Mat3::Identity() +
         2.0 * q.eta * q.eta.transpose() - 2.0 * q.s * skew(q.eta);
}

Quaternion rotmat_to_quat(const RotationMatrix& c_nb) {
  // Shepperd's method on R = C_b^n, for which q ∘ v ∘ q* = R v.
  const Mat3 r = c_nb.transpose();
  const double tr = r.trace();
  Quaternion q;
  if (tr > r(0, 0) && tr > r(1, 1) && tr > r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + tr);
    q = {0.25 * s, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s, (r(1, 0) - r(0, 1)) / s};
  } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2));
    q = {(r(2, 1) - r(1, 2)) / s, 0.25 * s, (r(0, 1) + r(1, 0)) / s, (r(0, 2) + r(2, 0)) / s};
  } else if (r(1, 1) > r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2));
    q = {(r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, 0.25 * s, (r(1, 2) + r(2, 1)) / s};
  } else {
    const double s = 2.0 * std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1));
    q = {(r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s, (r(1, 2) + r(2, 1)) / s, 0.25 * s};
  }
  return canonical(normalize(q));
}

Quaternion rodrigues_to_quat(const RodriguesVector& g) {
  const double n = std::sqrt(4.0 + g.squaredNorm());
  return {2.0 / n, g / n};
}

RodriguesVector quat_to_rodrigues(const Quaternion& dq) {
  if (std::abs(dq.s) <= kRodriguesSingularity) {
    throw SingularRotation("Rodrigues vector undefined near a 180 degree rotation");
  }
  return 2.0 * dq.eta / dq.s;
}

RotationMatrix rodrigues_to_rotmat(const RodriguesVector& g) {
  return quat_to_rotmat(rodrigues_to_quat(g));
}

Vec3 attitude_error(const Quaternion& q_true, const Quaternion& q_est) {
  return 2.0 * quat_mul(q_true, quat_conj(q_est)).eta;
}

Quaternion rotation_vector_to_quat(const Vec3& v) {
  const double angle = v.norm();
  if (angle < 1e-12) return normalize({1.0, 0.5 * v});
  return {std::cos(0.5 * angle), std::sin(0.5 * angle) / angle * v};
}

double wrap_pi(double a) {
  constexpr double pi = std::numbers::pi;
  a = std::fmod(a + pi, 2.0 * pi);
  if (a <= 0.0) a += 2.0 * pi;
  return a - pi;
}

EulerAngles quat_to_euler(const Quaternion& q) {
  const Mat3 r = quat_to_rotmat(q).transpose();  // C_b^n
  EulerAngles e;
  e.pitch = std::asin(std::clamp(r(1, 0), -1.0, 1.0));
  e.roll = std::atan2(-r(1, 2), r(1, 1));
  e.yaw = std::atan2(-r(2, 0), r(0, 0));
  return e;
}

Quaternion euler_to_quat(const EulerAngles& e) {
  const Quaternion q_yaw{std::cos(0.5 * e.yaw), 0.0, std::sin(0.5 * e.yaw), 0.0};
  const Quaternion q_pitch{std::cos(0.5 * e.pitch), 0.0, 0.0, std::sin(0.5 * e.pitch)};
  const Quaternion q_roll{std::cos(0.5 * e.roll), std::sin(0.5 * e.roll), 0.0, 0.0};
  return quat_mul(quat_mul(q_yaw, q_pitch), q_roll);
}

}  // namespace attestpo
