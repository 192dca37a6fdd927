#include "attestpo/init.hpp"

#include <algorithm>

#include <Eigen/SVD>

#include "attestpo/errors.hpp"

namespace attestpo {

Mat4 rho_accel(const Vec3& y_a, const Vec3& b_a, const EarthModel& model) {
  return quat_right_matrix(Quaternion::pure(y_a - b_a)) + quat_left_matrix(Quaternion::pure(gravity_n(model)));
}

Mat4 rho_mag(const Vec3& y_m, const EarthModel& model) {
  return quat_right_matrix(Quaternion::pure(y_m)) - quat_left_matrix(Quaternion::pure(mag_field_n(model)));
}

Mat4 rho_gyro(const Vec3& y_g, const Vec3& b_g, const EarthModel& model) {
  return quat_right_matrix(Quaternion::pure(y_g - b_g)) - quat_left_matrix(Quaternion::pure(earth_rate_n(model)));
}

RhoMatrices rho_matrices(const ImuSample& sample, const Vec3& b_a, const Vec3& b_g, const EarthModel& model) {
  return {rho_accel(sample.y_a, b_a, model), rho_mag(sample.y_m, model), rho_gyro(sample.y_g, b_g, model)};
}

namespace {

// Row block F^T ⊗ M (4 rows when M is 4×4).
void put_kron(Eigen::MatrixXd& A, Eigen::Index row, const Eigen::VectorXd& f, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    A.block(row, 4 * i, m.rows(), 4) += f(i) * m;
  }
}

}  // namespace

LinearSystem build_linear_system(const WindowContext& ctx, const WindowPrior& prior, int order,
                                 const EarthModel& model) {
  if (ctx.points() < 1) throw DomainError("linear system needs gyro points");
  const auto n_coef = 4 * (order + 1);
  const auto rows = 3 + 4 * ctx.points() + 4 * static_cast<Eigen::Index>(ctx.accel_tau.size() + ctx.mag_tau.size());
  LinearSystem sys;
  sys.order = order;
  sys.A = Eigen::MatrixXd::Zero(rows, n_coef);

  const Eigen::VectorXd f0 = cheb_basis(-1.0, order);
  const Mat4 conj_right = quat_right_matrix(quat_conj(prior.q0));
  put_kron(sys.A, 0, f0, 2.0 * conj_right.bottomRows<3>());

  Eigen::Index row = 3;
  for (int i = 0; i < ctx.points(); ++i, row += 4) {
    const double tau = ctx.rule.points(i);
    const Mat4 rg = rho_gyro(ctx.gyro_at_points.col(i), prior.b_g0, model);
    put_kron(sys.A, row, cheb_basis(tau, order), rg);
    put_kron(sys.A, row, -2.0 * ctx.rate_scale * cheb_basis_derivative(tau, order), Mat4::Identity());
  }
  for (std::size_t k = 0; k < ctx.accel_tau.size(); ++k, row += 4) {
    put_kron(sys.A, row, cheb_basis(ctx.accel_tau[k], order), rho_accel(ctx.accel_y[k], prior.b_a0, model));
  }
  for (std::size_t k = 0; k < ctx.mag_tau.size(); ++k, row += 4) {
    put_kron(sys.A, row, cheb_basis(ctx.mag_tau[k], order), rho_mag(ctx.mag_y[k], model));
  }

  sys.B = Eigen::MatrixXd::Zero(4, n_coef);
  put_kron(sys.B, 0, f0, Mat4::Identity());
  return sys;
}

HomogeneousSolution solve_homogeneous(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const Eigen::Index n = A.cols();
  if (B.cols() != n) throw DomainError("A and B column counts differ");
  if (A.isZero(0.0)) throw DomainError("homogeneous system with A = 0");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd_b(B, Eigen::ComputeFullV);
  const Eigen::VectorXd sb = svd_b.singularValues();
  Eigen::Index rank_b = 0;
  for (Eigen::Index i = 0; i < sb.size(); ++i) rank_b += sb(i) > 1e-12 * sb(0) ? 1 : 0;
  if (rank_b == 0) throw DomainError("constraint matrix B is zero");

  const Eigen::MatrixXd v_row = svd_b.matrixV().leftCols(rank_b);
  const Eigen::MatrixXd v_null = svd_b.matrixV().rightCols(n - rank_b);
  // x = v_row Σ⁻¹ u + v_null z  with ‖u‖ = 1
  const Eigen::MatrixXd a_row = A * v_row * sb.head(rank_b).cwiseInverse().asDiagonal();

  HomogeneousSolution out;
  Eigen::MatrixXd reduced = a_row;
  Eigen::MatrixXd elim;  // z = elim * u
  if (v_null.cols() > 0) {
    const Eigen::MatrixXd a_null = A * v_null;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd_n(a_null, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd_n.setThreshold(1e-12);
    if (svd_n.rank() < a_null.cols()) out.rank_deficient = true;
    elim = -svd_n.solve(a_row);
    reduced = a_row + a_null * elim;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd_r(reduced, Eigen::ComputeFullV);
  const Eigen::VectorXd sr = svd_r.singularValues();
  const Eigen::Index last = rank_b - 1;
  Eigen::VectorXd u = svd_r.matrixV().col(std::min<Eigen::Index>(last, svd_r.matrixV().cols() - 1));
  if (reduced.rows() < rank_b) {
    out.rank_deficient = true;
  } else if (last > 0 && sr(last - 1) - sr(last) <= 1e-12 * std::max(1.0, sr(0))) {
    out.rank_deficient = true;
  }

  out.x = v_row * sb.head(rank_b).cwiseInverse().asDiagonal() * u;
  if (v_null.cols() > 0) out.x += v_null * (elim * u);
  out.residual = (A * out.x).norm();
  return out;
}

ChebyshevSeries solve_homogeneous(const LinearSystem& sys, bool* rank_deficient) {
  const HomogeneousSolution sol = solve_homogeneous(sys.A, sys.B);
  if (rank_deficient) *rank_deficient = sol.rank_deficient;
  ChebyshevSeries D(Eigen::Map<const Eigen::MatrixXd>(sol.x.data(), 4, sys.order + 1));
  const Eigen::VectorXd q0 = series_eval(D, -1.0);
  if (q0(0) < 0.0) D.coeffs = -D.coeffs;
  return D;
}

ChebyshevSeries rod_coeffs_from_quat(const ChebyshevSeries& D, const Quaternion& q0, int order, int p_terms) {
  const Quaternion q0_conj = quat_conj(q0);
  return cheb_fit(
      [&](double tau) -> Eigen::VectorXd {
        const Quaternion q = normalize(Quaternion(Vec4(series_eval(D, tau))));
        Quaternion dq = quat_mul(q0_conj, q);
        return quat_to_rodrigues(dq);
      },
      order, p_terms);
}

ChebyshevSeries quat_coeffs_from_profile(const std::function<Quaternion(double)>& profile, int order,
                                         int p_terms) {
  // keep the hemisphere continuous across the nodes
  Quaternion reference = profile(-1.0);
  return cheb_fit(
      [&](double tau) -> Eigen::VectorXd {
        Quaternion q = profile(tau);
        if (q.coeffs().dot(reference.coeffs()) < 0.0) q = -q;
        return q.coeffs();
      },
      order, p_terms);
}

}  // namespace attestpo
