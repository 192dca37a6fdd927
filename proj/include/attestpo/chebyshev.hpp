#pragma once

#include <functional>

#include <Eigen/Core>

namespace attestpo {

/// Vector-valued Chebyshev series: column i of `coeffs` multiplies F_i(τ).
struct ChebyshevSeries {
  Eigen::MatrixXd coeffs;

  ChebyshevSeries() = default;
  explicit ChebyshevSeries(Eigen::MatrixXd c) : coeffs(std::move(c)) {}
  ChebyshevSeries(Eigen::Index dim, int order) : coeffs(Eigen::MatrixXd::Zero(dim, order + 1)) {}

  int order() const { return static_cast<int>(coeffs.cols()) - 1; }
  Eigen::Index dim() const { return coeffs.rows(); }
};

/// Clenshaw-Curtis rule on the Chebyshev extrema, ascending in τ.
struct QuadratureRule {
  Eigen::VectorXd points;
  Eigen::VectorXd weights;
};

/// F_0..F_order at τ. Inputs within 1e-12 of ±1 are clamped; DomainError beyond.
Eigen::VectorXd cheb_basis(double tau, int order);
/// dF_i/dτ at τ.
Eigen::VectorXd cheb_basis_derivative(double tau, int order);

/// τ_i = −cos(iπ/n), i = 0..n.
Eigen::VectorXd cheb_points(int n);
QuadratureRule clenshaw_curtis_weights(int n);

/// Maps t ∈ [t0, tM] to τ ∈ [−1, 1].
double affine_time_map(double t, double t0, double tM);
double affine_time_unmap(double tau, double t0, double tM);

Eigen::VectorXd series_eval(const ChebyshevSeries& series, double tau);
/// d/dτ of the series; callers apply the 2/(tM−t0) factor for time derivatives.
Eigen::VectorXd series_eval_derivative(const ChebyshevSeries& series, double tau);

using VectorFunction = std::function<Eigen::VectorXd(double)>;

/// Discrete cosine fit at the Chebyshev–Gauss nodes cos((k+½)π/P).
/// `p_terms` ≤ 0 selects the default 4·(order+1).
ChebyshevSeries cheb_fit(const VectorFunction& f, int order, int p_terms = 0);

}  // namespace attestpo
