#pragma once

#include <optional>
#include <span>
#include <vector>

#include "attestpo/chebyshev.hpp"
#include "attestpo/lm.hpp"
#include "attestpo/window.hpp"

namespace attestpo {

enum class Parameterization { quaternion, rodrigues };

/// Square-root information matrices: W Wᵀ = P⁻¹.
struct WeightSet {
  Mat9 W_x0 = Mat9::Identity();
  Mat3 W_g = Mat3::Identity();
  Mat3 W_a = Mat3::Identity();
  Mat3 W_m = Mat3::Identity();
};

/// Lower Cholesky factor of cov⁻¹. Throws NotPositiveDefinite.
Eigen::MatrixXd sqrt_information(const Eigen::MatrixXd& cov);
WeightSet build_weights(const WindowPrior& prior, const NoiseSpec& noise);

struct EstimatorConfig {
  double window_size = 0.1;  // s
  int cheb_order = 6;
  int quad_points = 0;       // N; 0 ties it to cheb_order
  int efh_degree = 3;
  int efh_extension = -1;    // phantom nodes per side, −1 = efh_degree
  int rod_fit_terms = 0;     // 0 = 4·(order+1)
  double rod_guard = 100.0;  // max ‖Δg‖ tolerated at the Chebyshev points
  /// Weight the dynamics integral with the continuous-time gyro PSD (R_g·T) rather than
  /// the per-sample covariance R_g.
  bool gyro_psd_weighting = true;
  /// Seed large windows from a 0.1 s run instead of the linear initializer.
  bool fit_init_from_short_windows = false;
  double short_window_size = 0.1;
  int short_window_order = 6;
  EarthModel earth;
  NoiseSpec noise;
  DetectorConfig detectors;
  LmOptions lm;
  AugLagOptions al;

  int points() const { return quad_points > 0 ? quad_points : cheb_order; }
};

/// Optimized coefficients for one window.
struct WindowSolution {
  Parameterization kind = Parameterization::quaternion;
  ChebyshevSeries coeffs;  // D (4 rows) or H (3 rows)
  Quaternion q_ref;        // Rodrigues reference attitude (unused for quaternions)
  Vec3 b_a = Vec3::Zero();
  Vec3 b_g = Vec3::Zero();
  double t0 = 0.0;
  double tM = 1.0;
  double objective = 0.0;
  SolverReport report;
  bool init_rank_deficient = false;

  /// Unit attitude at time t ∈ [t0, tM].
  Quaternion attitude(double t) const;
  /// Raw (possibly non-unit) quaternion at τ.
  Quaternion raw_attitude_tau(double tau) const;
};

/// Residual blocks of the window objective, each already weighted.
Vec9 residual_prior(const Quaternion& q_start, const Vec3& b_a, const Vec3& b_g, const WindowPrior& prior,
                    const Mat9& W_x0);
/// `rate_scale` is dτ/dt; the quaternion series derivative is converted to a time derivative.
Vec3 residual_dynamics_quat(const ChebyshevSeries& D, const Vec3& b_g, const Vec3& y_g, double tau,
                            double rate_scale, const Mat3& W_g, const EarthModel& model);
Vec3 residual_dynamics_rod(const ChebyshevSeries& H, const Quaternion& q_ref, const Vec3& b_g, const Vec3& y_g,
                           double tau, double rate_scale, const Mat3& W_g, const EarthModel& model);
Vec3 residual_accel(const Quaternion& q, const Vec3& b_a, const Vec3& y_a, const Mat3& W_a, const EarthModel& model);
Vec3 residual_mag(const Quaternion& q, const Vec3& y_m, const Mat3& W_m, const EarthModel& model);

/// Window objective J = J_x0 + J_v + J_z (and optional equality constraints in quaternion
/// mode) over a packed parameter vector [vec(coeffs), b_a, b_g].
class WindowProblem {
 public:
  WindowProblem(Parameterization kind, const WindowContext& ctx, const WindowPrior& prior, const WeightSet& weights,
                int order, const EarthModel& model, const Quaternion& q_ref = Quaternion::identity(),
                double gyro_weight_scale = 1.0, double rod_guard = 100.0);

  Eigen::Index num_params() const { return n_coef_ + 6; }
  Eigen::Index num_residuals() const;

  Eigen::VectorXd pack(const ChebyshevSeries& coeffs, const Vec3& b_a, const Vec3& b_g) const;
  ChebyshevSeries coeffs(const Eigen::VectorXd& x) const;

  /// Throws SingularRotation in Rodrigues mode when the Jacobian is requested at an
  /// iterate whose ‖Δg‖ exceeds the guard.
  void residuals(const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* jac) const;
  /// ‖q(τ_k)‖² − 1 at the Chebyshev points (quaternion mode only).
  void constraints(const Eigen::VectorXd& x, Eigen::VectorXd& c, Eigen::MatrixXd* jac) const;
  double objective(const Eigen::VectorXd& x) const;

  LeastSquaresProblem as_problem() const;

 private:
  Parameterization kind_;
  const WindowContext& ctx_;
  WindowPrior prior_;
  WeightSet weights_;
  int order_;
  EarthModel model_;
  Quaternion q_ref_;
  double gyro_scale_;
  double guard_;
  Eigen::Index dim_;
  Eigen::Index n_coef_;
  Eigen::VectorXd f_start_;
  std::vector<Eigen::VectorXd> f_pts_, df_pts_, f_acc_, f_mag_;
};

/// Standalone objective evaluation (used by tests and diagnostics).
double objective(const WindowProblem& problem, const Eigen::VectorXd& params);

/// Solves one window. `init` overrides the linear initializer with given quaternion
/// coefficients (D); biases start from the prior.
WindowSolution solve_qua_window(const ImuWindow& window, const WindowPrior& prior, const EstimatorConfig& config,
                                const std::optional<ChebyshevSeries>& init = std::nullopt);
WindowSolution solve_rod_window(const ImuWindow& window, const WindowPrior& prior, const EstimatorConfig& config,
                                const std::optional<ChebyshevSeries>& init = std::nullopt);
WindowSolution solve_window(Parameterization kind, const ImuWindow& window, const WindowPrior& prior,
                            const EstimatorConfig& config, const std::optional<ChebyshevSeries>& init = std::nullopt);

/// Per-sample outputs of a sliding run (AttEstPO or EKF).
struct EstimateTrack {
  std::vector<double> t;
  std::vector<Quaternion> q;
  std::vector<Vec3> b_a;
  std::vector<Vec3> b_g;
  std::vector<Vec9> p_diag;
  std::vector<WindowSolution> windows;  // empty for the EKF
  int nonconverged_windows = 0;
  double wall_seconds = 0.0;

  bool converged() const { return nonconverged_windows == 0; }
  std::size_t size() const { return t.size(); }
  /// Continuous attitude from the window polynomials (falls back to the nearest sample).
  Quaternion attitude_at(double time) const;
};

/// Sample index ranges [first, last] of the windows covering `n` samples.
/// A trailing remainder shorter than 20% of a window is merged into the previous one.
std::vector<std::pair<std::size_t, std::size_t>> window_partition(std::size_t n, std::size_t samples_per_window);

/// Sliding-window AttEstPO. Each window's end state and MEKF covariance seed the next.
EstimateTrack run_sliding(std::span<const ImuSample> samples, const WindowPrior& initial, const EstimatorConfig& config,
                          Parameterization kind);

/// Large-window variant seeded from a short-window run.
EstimateTrack run_sliding_fitted(std::span<const ImuSample> samples, const WindowPrior& initial,
                                 const EstimatorConfig& config, const EstimateTrack& short_track);

}  // namespace attestpo
