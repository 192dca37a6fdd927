#pragma once

#include <vector>

#include <Eigen/Core>

namespace attestpo {

/// Floater–Hormann barycentric rational interpolant on equispaced samples, optionally
/// extended by phantom nodes past each boundary (values by local polynomial extrapolation).
/// Immutable after construction.
class RationalInterpolant {
 public:
  RationalInterpolant() = default;

  /// Samples are the columns of `values`.
  RationalInterpolant(const Eigen::VectorXd& times, const Eigen::MatrixXd& values, int blend_degree,
                      int extension);

  Eigen::VectorXd operator()(double t) const;

  int blend_degree() const { return d_; }
  int extension() const { return ext_; }
  double spacing() const { return h_; }
  double first_time() const { return t_first_; }
  double last_time() const { return t_last_; }
  Eigen::Index dim() const { return values_.rows(); }
  const Eigen::VectorXd& bary_weights() const { return weights_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }

 private:
  Eigen::VectorXd nodes_;    // including phantom nodes
  Eigen::MatrixXd values_;
  Eigen::VectorXd weights_;
  int d_ = 0;
  int ext_ = 0;
  double h_ = 0.0;
  double t_first_ = 0.0;
  double t_last_ = 0.0;
};

inline constexpr int kDefaultBlendDegree = 3;

/// Builds the interpolant. `extension` < 0 picks the default of `d` phantom nodes per side,
/// used only when at least d+3 samples exist. Throws DomainError on fewer than d+1 samples
/// or non-equispaced times.
RationalInterpolant efh_build(const std::vector<double>& times, const Eigen::MatrixXd& samples,
                              int d = kDefaultBlendDegree, int extension = -1);

/// Throws DomainError outside [first − h/2, last + h/2].
Eigen::VectorXd efh_eval(const RationalInterpolant& itp, double t);

}  // namespace attestpo
