#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "attestpo/chebyshev.hpp"
#include "attestpo/efh.hpp"
#include "attestpo/sensors.hpp"

namespace attestpo {

using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat9 = Eigen::Matrix<double, 9, 9>;

/// Initial condition of a window: attitude, biases and the covariance of [δψ, δb_a, δb_g].
struct WindowPrior {
  Quaternion q0;
  Vec3 b_a0 = Vec3::Zero();
  Vec3 b_g0 = Vec3::Zero();
  Mat9 P0 = Mat9::Identity();
};

/// M+1 equispaced samples on [t0, tM]. Accelerometer/magnetometer samples before
/// `measurement_start` are skipped (a seam sample already consumed by the previous window).
struct ImuWindow {
  std::vector<ImuSample> samples;
  std::size_t measurement_start = 0;

  double t0() const { return samples.front().t; }
  double tM() const { return samples.back().t; }
  int accel_count() const;
  int mag_count() const;
};

ImuWindow make_window(std::span<const ImuSample> samples, std::size_t measurement_start = 0);

/// Everything a window solve needs that does not depend on the unknowns.
struct WindowContext {
  double t0 = 0.0;
  double tM = 0.0;
  double rate_scale = 0.0;  // dτ/dt = 2/(tM − t0)
  QuadratureRule rule;
  Eigen::MatrixXd gyro_at_points;  // 3 × (N+1), y_g at the Chebyshev points
  std::vector<double> accel_tau;
  std::vector<Vec3> accel_y;
  std::vector<double> mag_tau;
  std::vector<Vec3> mag_y;
  RationalInterpolant gyro_interp;

  int points() const { return static_cast<int>(rule.points.size()); }
};

/// `n_points` is N (N+1 Chebyshev points).
WindowContext build_context(const ImuWindow& window, int n_points, int efh_degree, int efh_extension = -1);

}  // namespace attestpo
