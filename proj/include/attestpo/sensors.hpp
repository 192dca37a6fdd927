#pragma once

#include "attestpo/rotmath.hpp"

namespace attestpo {

inline constexpr double kStandardGravity = 9.80665;
inline constexpr double kEarthRate = 7.2921151467e-5;

/// Site and environment. The navigation frame is North-Up-East.
struct EarthModel {
  double latitude = 0.0;           // rad
  double gravity = kStandardGravity;
  double earth_rate = kEarthRate;  // rad/s
  double mag_declination = 0.0;    // rad
  double mag_inclination = 0.0;    // rad
};

/// Measurement covariances (per sample) and bias random-walk PSDs.
struct NoiseSpec {
  Mat3 R_g = Mat3::Identity();
  Mat3 R_a = Mat3::Identity();
  Mat3 R_m = Mat3::Identity();
  Mat3 Q_bg = Mat3::Zero();
  Mat3 Q_ba = Mat3::Zero();
};

struct DetectorConfig {
  double eps_a = 0.3;   // m/s²
  double eps_m = 0.05;
};

struct ImuSample {
  double t = 0.0;
  Vec3 y_g = Vec3::Zero();
  Vec3 y_a = Vec3::Zero();
  Vec3 y_m = Vec3::Zero();
  bool accel_valid = true;
  bool mag_valid = true;
};

/// γⁿ = [0, −g, 0].
Vec3 gravity_n(const EarthModel& model);
/// ω_ieⁿ = [Ω cos L, Ω sin L, 0].
Vec3 earth_rate_n(const EarthModel& model);
/// Unit geomagnetic direction from declination and inclination.
Vec3 mag_field_n(const EarthModel& model);

bool accel_detector(const Vec3& y_a, const EarthModel& model, const DetectorConfig& cfg);
bool mag_detector(const Vec3& y_m, const DetectorConfig& cfg);
/// Sets both validity flags of `sample` from the detectors.
void apply_detectors(ImuSample& sample, const EarthModel& model, const DetectorConfig& cfg);

/// 2 q* ∘ q̇ + q* ∘ ω_ieⁿ ∘ q + b_g (vector parts). `q_dot` is a time derivative.
Vec3 predict_gyro(const Quaternion& q, const Vec4& q_dot, const Vec3& b_g, const EarthModel& model);
Vec3 predict_accel(const Quaternion& q, const Vec3& b_a, const EarthModel& model);
Vec3 predict_mag(const Quaternion& q, const EarthModel& model);

}  // namespace attestpo
