#pragma once

#include <cmath>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace attestpo {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Attitude quaternion q_n^b, scalar first. Composition is the Hamilton product and
/// a navigation-frame vector is resolved in the body frame by q* ∘ v ∘ q.
struct Quaternion {
  double s = 1.0;
  Vec3 eta = Vec3::Zero();

  Quaternion() = default;
  Quaternion(double s_, const Vec3& eta_) : s(s_), eta(eta_) {}
  Quaternion(double w, double x, double y, double z) : s(w), eta(x, y, z) {}
  explicit Quaternion(const Vec4& v) : s(v(0)), eta(v.tail<3>()) {}

  static Quaternion identity() { return {}; }
  /// Pure quaternion [0, v].
  static Quaternion pure(const Vec3& v) { return {0.0, v}; }

  Vec4 coeffs() const {
    Vec4 v;
    v << s, eta;
    return v;
  }
  double norm() const { return std::sqrt(s * s + eta.squaredNorm()); }
  Quaternion operator-() const { return {-s, -eta}; }
};

/// Rodrigues vector scaled as g = 2 tan(θ/2) · axis.
using RodriguesVector = Vec3;
/// C_n^b: maps navigation-frame vectors into the body frame.
using RotationMatrix = Mat3;

/// |Δs| at or below this raises SingularRotation in quat_to_rodrigues.
inline constexpr double kRodriguesSingularity = 1e-6;

Mat3 skew(const Vec3& v);

/// [q]⁺ such that q ∘ p = [q]⁺ p.
Mat4 quat_left_matrix(const Quaternion& q);
/// [q]⁻ such that p ∘ q = [q]⁻ p.
Mat4 quat_right_matrix(const Quaternion& q);

Quaternion quat_mul(const Quaternion& q1, const Quaternion& q2);
Quaternion quat_conj(const Quaternion& q);
Quaternion normalize(const Quaternion& q);
/// Flips the sign so that s ≥ 0.
Quaternion canonical(const Quaternion& q);

/// q* ∘ [0, v] ∘ q, vector part. Valid (and scaled by ‖q‖²) for non-unit q.
Vec3 rotate_vector(const Quaternion& q, const Vec3& v_n);
RotationMatrix quat_to_rotmat(const Quaternion& q);
Quaternion rotmat_to_quat(const RotationMatrix& c_nb);

Quaternion rodrigues_to_quat(const RodriguesVector& g);
/// Throws SingularRotation when |Δs| ≤ kRodriguesSingularity.
RodriguesVector quat_to_rodrigues(const Quaternion& dq);
RotationMatrix rodrigues_to_rotmat(const RodriguesVector& g);

/// δψ = 2 [q_true ∘ q_est*]_{2:4}, the navigation-frame small-angle attitude error.
Vec3 attitude_error(const Quaternion& q_true, const Quaternion& q_est);

/// Quaternion for a rotation of |v| radians about v/|v| (body increment).
Quaternion rotation_vector_to_quat(const Vec3& v);

/// Euler angles for the North-Up-East frame: C_b^n = R_up(yaw) R_east(pitch) R_north(roll).
/// Stored as {roll, yaw, pitch}, matching the N, U, E axis order.
struct EulerAngles {
  double roll = 0.0;
  double yaw = 0.0;
  double pitch = 0.0;
  Vec3 as_vector() const { return {roll, yaw, pitch}; }
};

EulerAngles quat_to_euler(const Quaternion& q);
Quaternion euler_to_quat(const EulerAngles& e);

/// Wraps an angle into (-π, π].
double wrap_pi(double angle);

}  // namespace attestpo
