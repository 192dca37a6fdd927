#pragma once

#include <Eigen/Core>

#include "attestpo/chebyshev.hpp"
#include "attestpo/window.hpp"

namespace attestpo {

/// The 4×4 matrices that annihilate the true attitude for noise-free data:
/// ρ_a q = 0, ρ_m q = 0 and ρ_g q − 2 q̇ = 0.
struct RhoMatrices {
  Mat4 accel;
  Mat4 mag;
  Mat4 gyro;
};

Mat4 rho_accel(const Vec3& y_a, const Vec3& b_a, const EarthModel& model);
Mat4 rho_mag(const Vec3& y_m, const EarthModel& model);
Mat4 rho_gyro(const Vec3& y_g, const Vec3& b_g, const EarthModel& model);
RhoMatrices rho_matrices(const ImuSample& sample, const Vec3& b_a, const Vec3& b_g, const EarthModel& model);

/// Homogeneous system  min ‖A vec(D)‖  s.t.  ‖B vec(D)‖ = 1.
/// Row blocks of A, in order: initial attitude (3), gyro (4 per Chebyshev point),
/// accelerometer (4 per valid sample), magnetometer (4 per valid sample).
struct LinearSystem {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  int order = 0;
};

LinearSystem build_linear_system(const WindowContext& ctx, const WindowPrior& prior, int order,
                                 const EarthModel& model);

struct HomogeneousSolution {
  Eigen::VectorXd x;
  double residual = 0.0;       // ‖A x‖
  bool rank_deficient = false;  // minimizer not unique
};

/// Generic solver: reduces the quadratic constraint to a unit sphere on B's row space,
/// eliminates the null-space coordinates in closed form, and takes the smallest singular
/// vector of what remains (same minimizer as the generalized SVD route).
HomogeneousSolution solve_homogeneous(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

/// Quaternion coefficients D (4 × (order+1)) for the system. The sign is chosen so q(τ₀)
/// has a non-negative scalar part.
ChebyshevSeries solve_homogeneous(const LinearSystem& sys, bool* rank_deficient = nullptr);

/// H such that q0 ∘ Δq(H F(τ)) ≈ normalize(D F(τ)); fitted at `p_terms` Chebyshev–Gauss nodes.
ChebyshevSeries rod_coeffs_from_quat(const ChebyshevSeries& D, const Quaternion& q0, int order, int p_terms = 0);

/// D fitted to an arbitrary attitude profile on [−1, 1] (large-window initialization).
ChebyshevSeries quat_coeffs_from_profile(const std::function<Quaternion(double)>& profile, int order,
                                         int p_terms = 0);

}  // namespace attestpo
