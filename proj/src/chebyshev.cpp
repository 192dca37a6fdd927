#include "attestpo/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "attestpo/errors.hpp"

namespace attestpo {
namespace {

constexpr double kClampTol = 1e-12;

double checked_tau(double tau) {
  if (std::abs(tau) > 1.0 + kClampTol) {
    throw DomainError("tau " + std::to_string(tau) + " outside [-1, 1]");
  }
  return std::clamp(tau, -1.0, 1.0);
}

void check_order(int order) {
  if (order < 0) throw DomainError("Chebyshev order must be non-negative");
}

}  // namespace

Eigen::VectorXd cheb_basis(double tau, int order) {
  check_order(order);
  tau = checked_tau(tau);
  Eigen::VectorXd f(order + 1);
  f(0) = 1.0;
  if (order >= 1) f(1) = tau;
  for (int i = 1; i < order; ++i) f(i + 1) = 2.0 * tau * f(i) - f(i - 1);
  return f;
}

Eigen::VectorXd cheb_basis_derivative(double tau, int order) {
  check_order(order);
  tau = checked_tau(tau);
  const Eigen::VectorXd f = cheb_basis(tau, order);
  Eigen::VectorXd df(order + 1);
  df(0) = 0.0;
  if (order >= 1) df(1) = 1.0;
  for (int i = 1; i < order; ++i) df(i + 1) = 2.0 * f(i) + 2.0 * tau * df(i) - df(i - 1);
  return df;
}

Eigen::VectorXd cheb_points(int n) {
  if (n < 1) throw DomainError("need at least two Chebyshev points");
  Eigen::VectorXd tau(n + 1);
  // sin form of −cos(iπ/n): exactly antisymmetric, exact endpoints
  for (int i = 0; i <= n; ++i) {
    tau(i) = std::sin(std::numbers::pi * (2.0 * i - n) / (2.0 * n));
  }
  return tau;
}

QuadratureRule clenshaw_curtis_weights(int n) {
  if (n < 1) throw DomainError("Clenshaw-Curtis rule needs n >= 1");
  QuadratureRule rule;
  rule.points = cheb_points(n);
  rule.weights.resize(n + 1);
  const double pi = std::numbers::pi;
  for (int j = 0; j <= n; ++j) {
    double sum = 0.0;
    for (int k = 1; 2 * k <= n; ++k) {
      const double b = (2 * k == n) ? 1.0 : 2.0;
      sum += b / (4.0 * k * k - 1.0) * std::cos(2.0 * k * j * pi / n);
    }
    const double c = (j == 0 || j == n) ? 1.0 : 2.0;
    rule.weights(j) = c / n * (1.0 - sum);
  }
  return rule;
}

double affine_time_map(double t, double t0, double tM) {
  if (!(tM > t0)) throw DomainError("time window must satisfy tM > t0");
  return (2.0 * t - (tM + t0)) / (tM - t0);
}

double affine_time_unmap(double tau, double t0, double tM) {
  if (!(tM > t0)) throw DomainError("time window must satisfy tM > t0");
  return 0.5 * ((tM - t0) * tau + (tM + t0));
}

Eigen::VectorXd series_eval(const ChebyshevSeries& series, double tau) {
  return series.coeffs * cheb_basis(tau, series.order());
}

Eigen::VectorXd series_eval_derivative(const ChebyshevSeries& series, double tau) {
  return series.coeffs * cheb_basis_derivative(tau, series.order());
}

ChebyshevSeries cheb_fit(const VectorFunction& f, int order, int p_terms) {
  check_order(order);
  if (p_terms <= 0) p_terms = 4 * (order + 1);
  if (p_terms < order + 1) throw DomainError("cheb_fit needs p_terms >= order + 1");
  const double pi = std::numbers::pi;
  ChebyshevSeries out;
  for (int k = 0; k < p_terms; ++k) {
    const double theta = (k + 0.5) * pi / p_terms;
    const Eigen::VectorXd value = f(std::cos(theta));
    if (k == 0) out.coeffs = Eigen::MatrixXd::Zero(value.size(), order + 1);
    for (int i = 0; i <= order; ++i) out.coeffs.col(i) += value * std::cos(i * theta);
  }
  for (int i = 0; i <= order; ++i) out.coeffs.col(i) *= (i == 0 ? 1.0 : 2.0) / p_terms;
  return out;
}

}  // namespace attestpo
