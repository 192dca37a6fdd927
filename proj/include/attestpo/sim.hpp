#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include "attestpo/sensors.hpp"

namespace attestpo {

inline constexpr double kDegToRad = std::numbers::pi / 180.0;

/// Coning-motion scenario. Defaults reproduce the reference simulation study.
struct ConingConfig {
  double coning_freq = 0.74 * std::numbers::pi;  // rad/s
  double coning_angle = 10.0 * kDegToRad;        // rad
  double duration = 20.0;                         // s
  double sample_rate = 100.0;                     // Hz
  EarthModel earth;
  NoiseSpec noise;
  DetectorConfig detectors;
  Vec3 gyro_bias = Vec3(0.5, 0.3, -0.2) * kDegToRad;  // rad/s
  Vec3 accel_bias = Vec3(0.1, 0.2, -0.2);             // m/s²
  bool earth_rate_in_gyro = true;
  std::uint64_t rng_seed = 1;

  double sample_period() const { return 1.0 / sample_rate; }
  std::size_t sample_count() const;
};

/// Gyro root-PSD (rad/s/√Hz) to a per-sample variance at `sample_rate`.
double gyro_psd_to_variance(double root_psd, double sample_rate);

/// Site at 28° latitude with the default simulation geomagnetic angles (−5°, 45°).
EarthModel default_earth_model();
/// 1°/√h gyro, 0.01 m/s² accelerometer, 0.02 magnetometer at `sample_rate`.
NoiseSpec default_noise_spec(double sample_rate);
ConingConfig default_coning_config();

struct TruthSample {
  double t = 0.0;
  Quaternion q;
  Vec3 b_a = Vec3::Zero();
  Vec3 b_g = Vec3::Zero();
};

struct SimulatedData {
  std::vector<ImuSample> samples;
  std::vector<TruthSample> truth;
  std::uint64_t seed = 0;
};

Quaternion coning_quat(const ConingConfig& cfg, double t);
/// Analytic time derivative of coning_quat.
Vec4 coning_quat_rate(const ConingConfig& cfg, double t);
/// ω_ib^b along the coning trajectory.
Vec3 coning_omega(const ConingConfig& cfg, double t);

/// Samples t = 0, T, ..., duration (inclusive). Deterministic for a given seed.
SimulatedData synthesize(const ConingConfig& cfg);

}  // namespace attestpo
