#pragma once

#include <span>
#include <vector>

#include "attestpo/estimator.hpp"
#include "attestpo/window.hpp"

namespace attestpo {

/// Continuous error-state model δẋ = B δx + G w over δx = [δψ, δb_a, δb_g].
struct DynamicsMatrices {
  Mat9 B = Mat9::Zero();
  Mat9 G = Mat9::Identity();
};

struct MeasurementMatrices {
  Eigen::Matrix<double, 3, 9> H_a;
  Eigen::Matrix<double, 3, 9> H_m;
};

DynamicsMatrices dynamics_matrices(const Quaternion& q_ref);
/// diag(R_g·T², Q_ba·T, Q_bg·T).
Mat9 process_noise(const NoiseSpec& noise, double T);
/// P⁻ = (I + B·T) P (I + B·T)ᵀ + G Q Gᵀ.
Mat9 predict_cov(const Mat9& P, const Quaternion& q_ref, const Mat9& Q, double T);
MeasurementMatrices measurement_matrices(const Quaternion& q_ref, const EarthModel& model);
/// P − P Hᵀ (H P Hᵀ + R)⁻¹ H P. Throws SingularInnovation.
Eigen::MatrixXd update_cov(const Eigen::MatrixXd& P_minus, const Eigen::MatrixXd& H, const Eigen::MatrixXd& R);

struct EkfState {
  Quaternion q;
  Vec3 b_a = Vec3::Zero();
  Vec3 b_g = Vec3::Zero();
  Mat9 P = Mat9::Identity();
};

/// Measurement update of mean and covariance with the sample's valid accel/mag readings.
EkfState ekf_update(const EkfState& state, const ImuSample& sample, const NoiseSpec& noise, const EarthModel& model);

/// Propagates over T with the bias-corrected rate, then applies the gated updates of `sample`.
/// When `previous_gyro` is given the rate is the mean of the two gyro readings.
EkfState ekf_step(const EkfState& state, const ImuSample& sample, const NoiseSpec& noise, const EarthModel& model,
                  double T, const Vec3* previous_gyro = nullptr);

/// Covariance-only recursion linearized along a given attitude track (one entry per window
/// sample). Entry 0 is P0, updated with sample 0 when the window measures it.
std::vector<Mat9> covariance_along_estimate(const ImuWindow& window, const std::vector<Quaternion>& attitude_track,
                                            const Mat9& P0, const NoiseSpec& noise, const EarthModel& model);

/// Full MEKF baseline over a sample sequence.
EstimateTrack run_ekf(std::span<const ImuSample> samples, const WindowPrior& initial, const EstimatorConfig& config);

}  // namespace attestpo
