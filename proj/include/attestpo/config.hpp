#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "attestpo/harness.hpp"

namespace attestpo {

enum class Mode { qua, rod, ekf, all };

std::string to_string(Mode mode);
/// Throws DomainError for anything but qua, rod, ekf, all.
Mode parse_mode(const std::string& text);

/// Everything a CLI run needs. Angles are stored in degrees, as written in the file.
struct RunConfig {
  Mode mode = Mode::all;
  double window_size = 0.1;  // s
  int cheb_order = 6;
  int quad_points = 6;       // N; the rule has N+1 points
  int efh_degree = 3;
  double eps_a = 0.3;        // m/s²
  double eps_m = 0.05;

  // earth model
  double latitude_deg = 28.0;
  double gravity = kStandardGravity;
  double earth_rate = kEarthRate;
  double mag_declination_deg = -5.0;
  double mag_inclination_deg = 45.0;

  // noise
  double gyro_arw_deg_sqrt_h = 1.0;
  double accel_std = 0.01;
  double mag_std = 0.02;
  double gyro_bias_walk = 0.0;   // rad/s/√s
  double accel_bias_walk = 0.0;  // m/s²/√s

  // simulation
  double coning_freq = 0.74 * 3.14159265358979323846;  // rad/s
  double coning_angle_deg = 10.0;
  double duration = 20.0;
  double sample_rate = 100.0;
  Vec3 gyro_bias_deg_s = Vec3(0.5, 0.3, -0.2);
  Vec3 accel_bias = Vec3(0.1, 0.2, -0.2);
  bool earth_rate_in_gyro = true;

  // Monte Carlo
  Vec3 attitude_std_deg = Vec3(5.0, 180.0, 5.0);  // {roll, yaw, pitch}
  double bias_sigma_factor = 2.0;
  int runs = 20;
  int threads = 0;

  // estimate input (CSV replay)
  Vec3 initial_euler_deg = Vec3::Zero();  // {roll, yaw, pitch}; used when no truth file is given
  std::string imu_path;
  std::string truth_path;

  std::string output_dir = "out";
  std::uint64_t seed = 1;
};

/// JSON text to a validated config with defaults applied.
/// Throws ParseError (syntax or type, with line/key) and ValidationError (all violations).
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::filesystem::path& path);
/// Canonical JSON: every key, fixed order, shortest round-trip number formatting.
std::string serialize_config(const RunConfig& config);

EarthModel earth_model(const RunConfig& config);
NoiseSpec noise_spec(const RunConfig& config);
ConingConfig coning_config(const RunConfig& config);
EstimatorConfig estimator_config(const RunConfig& config);
/// Algorithms selected by `mode`; `all` is qua, rod and ekf.
std::vector<AlgorithmSpec> algorithms(const RunConfig& config);
MonteCarloConfig monte_carlo_config(const RunConfig& config);

}  // namespace attestpo
