#pragma once

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "attestpo/rotmath.hpp"

namespace attestpo::testing {

inline Quaternion random_unit_quat(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return normalize(Quaternion(n(rng), n(rng), n(rng), n(rng)));
}

inline Vec3 random_vec(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return {n(rng), n(rng), n(rng)};
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Quaternions equal up to the double cover.
inline double quat_distance(const Quaternion& a, const Quaternion& b) {
  return std::min((a.coeffs() - b.coeffs()).norm(), (a.coeffs() + b.coeffs()).norm());
}

}  // namespace attestpo::testing
