#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "attestpo/estimator.hpp"
#include "attestpo/sim.hpp"

namespace attestpo {

/// Per-sample errors of one estimate against truth (δ = true − estimate).
struct RunErrors {
  std::vector<double> t;
  std::vector<Vec3> attitude;  // δψ, rad
  std::vector<Vec3> accel_bias;
  std::vector<Vec3> gyro_bias;
  std::vector<Vec3> euler;     // wrapped Euler-angle differences {roll, yaw, pitch}, rad
  std::vector<Vec3> sigma;     // √trace of the attitude / accel-bias / gyro-bias covariance blocks
};

/// Throws MismatchedTracks when timestamps differ.
RunErrors track_errors(const EstimateTrack& estimate, const std::vector<TruthSample>& truth);

/// Averages over runs of the absolute (norm) error per component group.
struct ErrorTracks {
  std::vector<double> t;
  std::vector<double> attitude;
  std::vector<double> accel_bias;
  std::vector<double> gyro_bias;
};

/// ε(k) = (1/L) Σ ‖x̂ − x‖. Throws MismatchedTracks.
ErrorTracks avg_abs_error(const std::vector<RunErrors>& runs);
/// Run-averaged √trace of each covariance block (σ of the norm error).
ErrorTracks avg_sigma(const std::vector<RunErrors>& runs);

/// 2·arccos of the canonical scalar part of q₀* ∘ q_t, in [0, π].
double relative_rotation_angle(const Quaternion& q_t, const Quaternion& q_0);
double rotation_angle_error(double alpha_ref, double alpha_est);
/// Fraction of timesteps with error ≤ 2σ.
double consistency_fraction(const std::vector<double>& error, const std::vector<double>& sigma);
/// Root mean square over runs of the final Euler error, per axis {roll, yaw, pitch}.
Vec3 final_euler_rmse(const std::vector<RunErrors>& runs);
/// First time after which `error` stays strictly below `threshold`; +∞ if never.
double settle_time(const std::vector<double>& t, const std::vector<double>& error, double threshold);

enum class AlgorithmKind { qua, rod, ekf };

struct AlgorithmSpec {
  std::string name;
  AlgorithmKind kind = AlgorithmKind::qua;
  EstimatorConfig config;
};

struct MonteCarloConfig {
  ConingConfig sim = default_coning_config();
  std::vector<AlgorithmSpec> algorithms;
  int runs = 20;
  std::uint64_t seed = 1;
  /// Initial attitude error standard deviations {roll, yaw, pitch}, rad.
  Vec3 attitude_std = Vec3(5.0, 180.0, 5.0) * kDegToRad;
  /// Prior bias σ as a multiple of the true bias magnitude.
  double bias_sigma_factor = 2.0;
  /// Worker threads; 0 defers to ATTESTPO_THREADS, then to the OpenMP default.
  int threads = 0;
};

/// Estimator configuration matching a coning scenario (earth model, noise, detectors).
EstimatorConfig estimator_config_for(const ConingConfig& sim, double window_size = 0.1, int order = 6);
/// Qua and Rod at 0.1 s plus the EKF, all on the scenario's models.
std::vector<AlgorithmSpec> default_algorithms(const ConingConfig& sim);

struct AlgorithmMetrics {
  std::string name;
  ErrorTracks error;
  ErrorTracks sigma;
  Vec3 final_rmse = Vec3::Zero();  // {roll, yaw, pitch}, rad
  double attitude_consistency = 0.0;
  double accel_bias_consistency = 0.0;
  double gyro_bias_consistency = 0.0;
  double mean_wall_seconds = 0.0;
  int failed_runs = 0;
  int nonconverged_runs = 0;
  std::vector<std::string> failures;  // "run <i>: <message>"
};

struct RunMetrics {
  std::vector<AlgorithmMetrics> algorithms;
  std::vector<std::uint64_t> seeds;
  int runs = 0;
  int threads = 1;

  const AlgorithmMetrics& find(const std::string& name) const;
  bool all_converged() const;
};

/// Prior drawn for replication `run`: truth at t₀ perturbed by the configured Euler errors.
WindowPrior monte_carlo_prior(const MonteCarloConfig& cfg, const SimulatedData& data, std::uint64_t seed);
std::uint64_t replication_seed(std::uint64_t base, int run);

/// Replications in parallel; the reduction runs in replication order.
RunMetrics monte_carlo(const MonteCarloConfig& config);
/// Reference implementation on one thread.
RunMetrics monte_carlo_serial(const MonteCarloConfig& config);
int resolve_threads(int requested);

/// Runs one algorithm on a dataset.
EstimateTrack run_algorithm(const AlgorithmSpec& spec, const std::vector<ImuSample>& samples,
                            const WindowPrior& prior);

}  // namespace attestpo
