#include "attestpo/efh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "attestpo/errors.hpp"

namespace attestpo {
namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Lagrange weights of nodes 0..m evaluated at x (all in units of the spacing).
Eigen::VectorXd lagrange_weights(int m, double x) {
  Eigen::VectorXd l = Eigen::VectorXd::Ones(m + 1);
  for (int k = 0; k <= m; ++k) {
    for (int j = 0; j <= m; ++j) {
      if (j != k) l(k) *= (x - j) / static_cast<double>(k - j);
    }
  }
  return l;
}

}  // namespace

RationalInterpolant::RationalInterpolant(const Eigen::VectorXd& times, const Eigen::MatrixXd& values,
                                         int blend_degree, int extension)
    : d_(blend_degree), ext_(extension) {
  const auto n_samples = static_cast<int>(times.size());
  t_first_ = times(0);
  t_last_ = times(n_samples - 1);
  h_ = (t_last_ - t_first_) / (n_samples - 1);

  const int total = n_samples + 2 * ext_;
  nodes_.resize(total);
  values_.resize(values.rows(), total);
  for (int i = 0; i < total; ++i) nodes_(i) = t_first_ + (i - ext_) * h_;
  values_.middleCols(ext_, n_samples) = values;

  if (ext_ > 0) {
    // degree-d polynomial through the d+1 samples nearest each boundary
    const int m = d_;
    for (int j = 1; j <= ext_; ++j) {
      const Eigen::VectorXd left = lagrange_weights(m, -static_cast<double>(j));
      values_.col(ext_ - j) = values.leftCols(m + 1) * left;
      // right side: node index m-k counts back from the last sample
      const Eigen::VectorXd right = lagrange_weights(m, -static_cast<double>(j));
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(values.rows());
      for (int k = 0; k <= m; ++k) acc += right(k) * values.col(n_samples - 1 - k);
      values_.col(ext_ + n_samples - 1 + j) = acc;
    }
  }

  // Floater–Hormann weights on an equispaced grid of `total` nodes.
  const int n = total - 1;
  weights_.resize(total);
  for (int i = 0; i <= n; ++i) {
    double sum = 0.0;
    for (int k = std::max(0, i - d_); k <= std::min(i, n - d_); ++k) sum += binomial(d_, i - k);
    weights_(i) = ((i - d_) % 2 == 0 ? 1.0 : -1.0) * sum;
  }
}

Eigen::VectorXd RationalInterpolant::operator()(double t) const {
  const double snap = 1e-12 * h_;
  Eigen::VectorXd num = Eigen::VectorXd::Zero(values_.rows());
  double den = 0.0;
  for (Eigen::Index i = 0; i < nodes_.size(); ++i) {
    const double diff = t - nodes_(i);
    if (std::abs(diff) <= snap) return values_.col(i);
    const double c = weights_(i) / diff;
    num += c * values_.col(i);
    den += c;
  }
  return num / den;
}

RationalInterpolant efh_build(const std::vector<double>& times, const Eigen::MatrixXd& samples,
                              int d, int extension) {
  if (d < 0) throw DomainError("blend degree must be non-negative");
  const auto n = static_cast<int>(times.size());
  if (samples.cols() != n) throw DomainError("sample count does not match time count");
  if (n < d + 1 || n < 2) {
    throw DomainError("EFH needs at least d+1 = " + std::to_string(d + 1) + " samples, got " +
                      std::to_string(n));
  }
  const double h = (times.back() - times.front()) / (n - 1);
  if (!(h > 0.0)) throw DomainError("sample times must be strictly increasing");
  for (int i = 0; i < n; ++i) {
    if (std::abs(times[i] - (times.front() + i * h)) > 1e-9 * h + 1e-12 * std::abs(times[i])) {
      throw DomainError("sample times are not equispaced");
    }
  }
  int ext = extension < 0 ? d : extension;
  if (n < d + 3) ext = 0;
  const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(times.data(), n);
  return RationalInterpolant(t, samples, d, ext);
}

Eigen::VectorXd efh_eval(const RationalInterpolant& itp, double t) {
  const double h = itp.spacing();
  if (t < itp.first_time() - 0.5 * h || t > itp.last_time() + 0.5 * h) {
    throw DomainError("EFH evaluation outside the sampled range");
  }
  return itp(t);
}

}  // namespace attestpo
