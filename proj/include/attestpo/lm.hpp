#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace attestpo {

/// Fills the value vector and, when the matrix pointer is non-null, its Jacobian.
using VectorFunctionWithJacobian =
    std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& value, Eigen::MatrixXd* jacobian)>;

/// min ‖r(x)‖²  subject to  c(x) = 0 (the constraint function may be empty).
struct LeastSquaresProblem {
  VectorFunctionWithJacobian residuals;
  VectorFunctionWithJacobian constraints;
};

struct LmOptions {
  int max_iterations = 100;
  double gradient_tol = 1e-10;
  double step_tol = 1e-12;
  double cost_tol = 1e-15;
  double initial_damping = 1e-3;
  bool numeric_jacobian = false;
};

struct AugLagOptions {
  double initial_penalty = 10.0;
  double penalty_growth = 10.0;
  double required_decrease = 4.0;
  int max_rounds = 10;
  double constraint_tol = 1e-8;
  /// Multiply the initial penalty by the ratio of mean Gauss-Newton curvatures
  /// (objective over constraints) at the starting point.
  bool relative_penalty = true;
};

struct SolverReport {
  Eigen::VectorXd x;
  double cost = 0.0;                 // ‖r‖², without augmentation terms
  double constraint_violation = 0.0;  // max |c_k|
  double gradient_norm = 0.0;         // ∞-norm of the last inner gradient
  int iterations = 0;                 // total accepted + rejected LM iterations
  int rounds = 0;                     // augmented-Lagrangian rounds
  bool converged = false;
  std::vector<double> merit_history;  // merit after each accepted step, last round only
};

/// Central-difference Jacobian, step scaled per parameter.
Eigen::MatrixXd numeric_jacobian(const VectorFunctionWithJacobian& f, const Eigen::VectorXd& x,
                                 double rel_step = 1e-6);

/// Levenberg–Marquardt with Marquardt diagonal scaling and Nielsen's damping update.
SolverReport levenberg_marquardt(const VectorFunctionWithJacobian& residuals, Eigen::VectorXd x0,
                                 const LmOptions& options);

/// Equality constraints folded in by an augmented Lagrangian; inner solves by LM.
/// Without constraints this is a single LM solve.
SolverReport solve_constrained(const LeastSquaresProblem& problem, Eigen::VectorXd x0,
                               const LmOptions& lm, const AugLagOptions& al);

}  // namespace attestpo
