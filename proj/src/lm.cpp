#include "attestpo/lm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

namespace attestpo {

Eigen::MatrixXd numeric_jacobian(const VectorFunctionWithJacobian& f, const Eigen::VectorXd& x,
                                 double rel_step) {
  Eigen::VectorXd v0;
  f(x, v0, nullptr);
  Eigen::MatrixXd jac(v0.size(), x.size());
  Eigen::VectorXd xp = x;
  Eigen::VectorXd vp, vm;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = rel_step * std::max(1.0, std::abs(x(j)));
    xp(j) = x(j) + h;
    f(xp, vp, nullptr);
    xp(j) = x(j) - h;
    f(xp, vm, nullptr);
    xp(j) = x(j);
    jac.col(j) = (vp - vm) / (2.0 * h);
  }
  return jac;
}

SolverReport levenberg_marquardt(const VectorFunctionWithJacobian& residuals, Eigen::VectorXd x,
                                 const LmOptions& opt) {
  auto evaluate = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    if (jac != nullptr && opt.numeric_jacobian) {
      residuals(p, r, nullptr);
      *jac = numeric_jacobian(residuals, p);
    } else {
      residuals(p, r, jac);
    }
  };

  SolverReport rep;
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  evaluate(x, r, &jac);
  double cost = r.squaredNorm();
  Eigen::MatrixXd normal = jac.transpose() * jac;
  Eigen::VectorXd grad = jac.transpose() * r;
  double damping = opt.initial_damping;
  double nu = 2.0;
  rep.merit_history.push_back(cost);

  Eigen::VectorXd r_new;
  for (int it = 0; it < opt.max_iterations; ++it) {
    rep.gradient_norm = grad.lpNorm<Eigen::Infinity>();
    if (rep.gradient_norm <= opt.gradient_tol) {
      rep.converged = true;
      break;
    }
    ++rep.iterations;
    Eigen::VectorXd scale = normal.diagonal().cwiseMax(1e-12 * std::max(1.0, normal.diagonal().maxCoeff()));
    Eigen::MatrixXd lhs = normal;
    lhs.diagonal() += damping * scale;
    const Eigen::VectorXd step = lhs.ldlt().solve(-grad);
    if (!step.allFinite()) {
      damping *= nu;
      nu *= 2.0;
      continue;
    }
    const Eigen::VectorXd x_new = x + step;
    residuals(x_new, r_new, nullptr);
    const double cost_new = r_new.allFinite() ? r_new.squaredNorm() : std::numeric_limits<double>::infinity();
    const double predicted = -step.dot(grad) + damping * step.dot(scale.cwiseProduct(step));
    const double rho = predicted > 0.0 ? (cost - cost_new) / predicted : -1.0;

    if (rho > 0.0) {
      const double decrease = cost - cost_new;
      x = x_new;
      evaluate(x, r, &jac);
      cost = r.squaredNorm();
      normal = jac.transpose() * jac;
      grad = jac.transpose() * r;
      rep.merit_history.push_back(cost);
      damping *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      nu = 2.0;
      if (step.norm() <= opt.step_tol * (x.norm() + opt.step_tol) || decrease <= opt.cost_tol * cost) {
        rep.converged = true;
        rep.gradient_norm = grad.lpNorm<Eigen::Infinity>();
        break;
      }
    } else {
      damping *= nu;
      nu *= 2.0;
      if (step.norm() <= opt.step_tol * (x.norm() + opt.step_tol)) {
        // no representable improvement left
        rep.converged = true;
        break;
      }
    }
  }
  rep.x = x;
  rep.cost = cost;
  return rep;
}

SolverReport solve_constrained(const LeastSquaresProblem& problem, Eigen::VectorXd x, const LmOptions& lm,
                               const AugLagOptions& al) {
  if (!problem.constraints) return levenberg_marquardt(problem.residuals, std::move(x), lm);

  Eigen::VectorXd c;
  Eigen::MatrixXd jc;
  problem.constraints(x, c, &jc);
  Eigen::VectorXd multipliers = Eigen::VectorXd::Zero(c.size());
  double penalty = al.initial_penalty;
  if (al.relative_penalty) {
    Eigen::VectorXd r;
    Eigen::MatrixXd jr;
    problem.residuals(x, r, &jr);
    const double objective_curvature = jr.colwise().squaredNorm().mean();
    const double constraint_curvature = jc.colwise().squaredNorm().mean();
    if (objective_curvature > 0.0 && constraint_curvature > 0.0) {
      penalty *= std::max(1.0, objective_curvature / constraint_curvature);
    }
  }
  double prev_violation = c.lpNorm<Eigen::Infinity>();

  SolverReport total;
  for (int round = 0; round < al.max_rounds; ++round) {
    const double w = std::sqrt(0.5 * penalty);
    const Eigen::VectorXd shift = multipliers / penalty;
    VectorFunctionWithJacobian merit = [&](const Eigen::VectorXd& p, Eigen::VectorXd& out, Eigen::MatrixXd* jac) {
      Eigen::VectorXd r, cv;
      Eigen::MatrixXd jr, jc;
      problem.residuals(p, r, jac ? &jr : nullptr);
      problem.constraints(p, cv, jac ? &jc : nullptr);
      out.resize(r.size() + cv.size());
      out << r, w * (cv + shift);
      if (jac) {
        jac->resize(out.size(), p.size());
        *jac << jr, w * jc;
      }
    };
    SolverReport inner = levenberg_marquardt(merit, x, lm);
    x = inner.x;
    total.iterations += inner.iterations;
    total.gradient_norm = inner.gradient_norm;
    total.merit_history = std::move(inner.merit_history);
    total.rounds = round + 1;

    problem.constraints(x, c, nullptr);
    const double violation = c.lpNorm<Eigen::Infinity>();
    total.constraint_violation = violation;
    if (violation <= al.constraint_tol) {
      total.converged = inner.converged;
      break;
    }
    multipliers += penalty * c;
    if (violation > prev_violation / al.required_decrease) penalty *= al.penalty_growth;
    prev_violation = violation;
  }

  Eigen::VectorXd r;
  problem.residuals(x, r, nullptr);
  total.x = x;
  total.cost = r.squaredNorm();
  return total;
}

}  // namespace attestpo
