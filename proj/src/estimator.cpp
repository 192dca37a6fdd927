#include "attestpo/estimator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <Eigen/Cholesky>

#include "attestpo/errors.hpp"
#include "attestpo/init.hpp"
#include "attestpo/mekf.hpp"

namespace attestpo {
namespace {

using Mat34 = Eigen::Matrix<double, 3, 4>;
using Mat43 = Eigen::Matrix<double, 4, 3>;

// d/dq and d/dp of vec(q* ∘ p)
Mat34 conj_product_dq(const Vec4& p) {
  Mat34 j;
  j.col(0) = p.tail<3>();
  j.rightCols<3>() = -p(0) * Mat3::Identity() + skew(p.tail<3>());
  return j;
}

Mat34 conj_product_dp(const Vec4& q) {
  Mat34 j;
  j.col(0) = -q.tail<3>();
  j.rightCols<3>() = q(0) * Mat3::Identity() - skew(q.tail<3>());
  return j;
}

// d/dq of vec(q* ∘ [0, v] ∘ q) for a general (non-unit) q
Mat34 rotate_dq(const Vec4& q, const Vec3& v) {
  const double s = q(0);
  const Vec3 eta = q.tail<3>();
  Mat34 j;
  j.col(0) = 2.0 * s * v + 2.0 * v.cross(eta);
  j.rightCols<3>() = -2.0 * v * eta.transpose() + 2.0 * eta.dot(v) * Mat3::Identity() +
                     2.0 * eta * v.transpose() + 2.0 * s * skew(v);
  return j;
}

Mat43 rodrigues_quat_jacobian(const Vec3& g) {
  const double n2 = 4.0 + g.squaredNorm();
  const double n = std::sqrt(n2);
  const double n3 = n2 * n;
  Mat43 j;
  j.row(0) = -2.0 * g.transpose() / n3;
  j.bottomRows<3>() = Mat3::Identity() / n - g * g.transpose() / n3;
  return j;
}

// Body rate implied by a Rodrigues update and its rate: (4ġ − 2 g×ġ)/(4 + ‖g‖²).
Vec3 rodrigues_rate(const Vec3& g, const Vec3& gd) {
  return (4.0 * gd - 2.0 * g.cross(gd)) / (4.0 + g.squaredNorm());
}

// Kronecker expansion: columns 3i..3i+2 (or 4i..) of d(C F)/dvec(C) times a left factor.
void add_coef_block(Eigen::Ref<Eigen::MatrixXd> jac, const Eigen::MatrixXd& left, const Eigen::VectorXd& f,
                    Eigen::Index dim) {
  for (Eigen::Index i = 0; i < f.size(); ++i) jac.middleCols(dim * i, dim) += f(i) * left;
}

}  // namespace

Eigen::MatrixXd sqrt_information(const Eigen::MatrixXd& cov) {
  const Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("covariance is not positive definite");
  const Eigen::MatrixXd info = llt.solve(Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
  Eigen::LLT<Eigen::MatrixXd> llt_info(0.5 * (info + info.transpose()));
  if (llt_info.info() != Eigen::Success) throw NotPositiveDefinite("information matrix is not positive definite");
  return llt_info.matrixL();
}

WeightSet build_weights(const WindowPrior& prior, const NoiseSpec& noise) {
  WeightSet w;
  w.W_x0 = sqrt_information(prior.P0);
  w.W_g = sqrt_information(noise.R_g);
  w.W_a = sqrt_information(noise.R_a);
  w.W_m = sqrt_information(noise.R_m);
  return w;
}

Vec9 residual_prior(const Quaternion& q_start, const Vec3& b_a, const Vec3& b_g, const WindowPrior& prior,
                    const Mat9& W_x0) {
  Vec9 e;
  e << attitude_error(q_start, prior.q0), b_a - prior.b_a0, b_g - prior.b_g0;
  return W_x0.transpose() * e;
}

Vec3 residual_dynamics_quat(const ChebyshevSeries& D, const Vec3& b_g, const Vec3& y_g, double tau, double rate_scale,
                            const Mat3& W_g, const EarthModel& model) {
  const Quaternion q(Vec4(series_eval(D, tau)));
  const Vec4 q_dot = rate_scale * series_eval_derivative(D, tau);
  return W_g.transpose() * (y_g - predict_gyro(q, q_dot, b_g, model));
}

Vec3 residual_dynamics_rod(const ChebyshevSeries& H, const Quaternion& q_ref, const Vec3& b_g, const Vec3& y_g,
                           double tau, double rate_scale, const Mat3& W_g, const EarthModel& model) {
  const Vec3 g = series_eval(H, tau);
  const Vec3 gd = rate_scale * series_eval_derivative(H, tau);
  const Vec3 earth = rotate_vector(rodrigues_to_quat(g), rotate_vector(q_ref, earth_rate_n(model)));
  return W_g.transpose() * (y_g - rodrigues_rate(g, gd) - earth - b_g);
}

Vec3 residual_accel(const Quaternion& q, const Vec3& b_a, const Vec3& y_a, const Mat3& W_a, const EarthModel& model) {
  return W_a.transpose() * (y_a + rotate_vector(q, gravity_n(model)) - b_a);
}

Vec3 residual_mag(const Quaternion& q, const Vec3& y_m, const Mat3& W_m, const EarthModel& model) {
  return W_m.transpose() * (y_m - rotate_vector(q, mag_field_n(model)));
}

// ---------------------------------------------------------------------------

WindowProblem::WindowProblem(Parameterization kind, const WindowContext& ctx, const WindowPrior& prior,
                             const WeightSet& weights, int order, const EarthModel& model, const Quaternion& q_ref,
                             double gyro_weight_scale, double rod_guard)
    : kind_(kind),
      ctx_(ctx),
      prior_(prior),
      weights_(weights),
      order_(order),
      model_(model),
      q_ref_(q_ref),
      gyro_scale_(gyro_weight_scale),
      guard_(rod_guard) {
  dim_ = kind == Parameterization::quaternion ? 4 : 3;
  n_coef_ = dim_ * (order + 1);
  f_start_ = cheb_basis(-1.0, order);
  for (int i = 0; i < ctx.points(); ++i) {
    f_pts_.push_back(cheb_basis(ctx.rule.points(i), order));
    df_pts_.push_back(cheb_basis_derivative(ctx.rule.points(i), order));
  }
  for (double tau : ctx.accel_tau) f_acc_.push_back(cheb_basis(tau, order));
  for (double tau : ctx.mag_tau) f_mag_.push_back(cheb_basis(tau, order));
}

Eigen::Index WindowProblem::num_residuals() const {
  return 9 + 3 * static_cast<Eigen::Index>(f_pts_.size() + f_acc_.size() + f_mag_.size());
}

Eigen::VectorXd WindowProblem::pack(const ChebyshevSeries& coeffs, const Vec3& b_a, const Vec3& b_g) const {
  if (coeffs.dim() != dim_ || coeffs.order() != order_) throw DomainError("coefficient shape mismatch");
  Eigen::VectorXd x(num_params());
  x.head(n_coef_) = Eigen::Map<const Eigen::VectorXd>(coeffs.coeffs.data(), n_coef_);
  x.segment<3>(n_coef_) = b_a;
  x.segment<3>(n_coef_ + 3) = b_g;
  return x;
}

ChebyshevSeries WindowProblem::coeffs(const Eigen::VectorXd& x) const {
  return ChebyshevSeries(Eigen::Map<const Eigen::MatrixXd>(x.data(), dim_, order_ + 1));
}

void WindowProblem::residuals(const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* jac) const {
  const Eigen::Map<const Eigen::MatrixXd> C(x.data(), dim_, order_ + 1);
  const Vec3 b_a = x.segment<3>(n_coef_);
  const Vec3 b_g = x.segment<3>(n_coef_ + 3);
  const Eigen::Index ia = n_coef_;
  const Eigen::Index ig = n_coef_ + 3;
  const Mat4 ref_left = quat_left_matrix(q_ref_);
  const Vec3 w_ie = earth_rate_n(model_);
  const Vec3 w_ref = rotate_vector(q_ref_, w_ie);
  const Vec3 gamma = gravity_n(model_);
  const Vec3 mag = mag_field_n(model_);
  const bool rod = kind_ == Parameterization::rodrigues;

  r.resize(num_residuals());
  if (jac) jac->setZero(num_residuals(), num_params());

  // attitude at τ and dq/d(Δg) in Rodrigues mode
  Mat43 dq_dg = Mat43::Zero();
  auto attitude = [&](const Eigen::VectorXd& f, Vec3* g_out) -> Vec4 {
    if (!rod) return C * f;
    const Vec3 g = C * f;
    if (g_out) *g_out = g;
    if (jac) dq_dg = ref_left * rodrigues_quat_jacobian(g);
    return ref_left * rodrigues_to_quat(g).coeffs();
  };
  // coefficient Jacobian of a residual that depends on q through `dq` (3×4)
  auto coef_from_q = [&](Eigen::Index row, const Mat34& dq, const Eigen::VectorXd& f) {
    if (rod) {
      add_coef_block(jac->block(row, 0, 3, n_coef_), dq * dq_dg, f, 3);
    } else {
      add_coef_block(jac->block(row, 0, 3, n_coef_), dq, f, 4);
    }
  };

  // prior
  {
    Vec3 g;
    const Vec4 q = attitude(f_start_, &g);
    if (rod && jac && g.norm() > guard_) throw SingularRotation("Rodrigues update exceeds the guard");
    const Mat4 conj_right = quat_right_matrix(quat_conj(prior_.q0));
    Vec9 e;
    e << 2.0 * (conj_right * q).tail<3>(), b_a - prior_.b_a0, b_g - prior_.b_g0;
    const Mat9 wt = weights_.W_x0.transpose();
    r.head<9>() = wt * e;
    if (jac) {
      const Mat34 dpsi = 2.0 * conj_right.bottomRows<3>();
      for (int blk = 0; blk < 3; ++blk) coef_from_q(blk * 3, wt.block<3, 3>(3 * blk, 0) * dpsi, f_start_);
      jac->block<9, 3>(0, ia) = wt.middleCols<3>(3);
      jac->block<9, 3>(0, ig) = wt.rightCols<3>();
    }
  }

  Eigen::Index row = 9;
  const double half = 0.5 * (ctx_.tM - ctx_.t0);
  const Mat3 wg = weights_.W_g.transpose();
  for (std::size_t i = 0; i < f_pts_.size(); ++i, row += 3) {
    const double s = gyro_scale_ * std::sqrt(ctx_.rule.weights(static_cast<Eigen::Index>(i)) * half);
    const Vec3 y = ctx_.gyro_at_points.col(static_cast<Eigen::Index>(i));
    const Eigen::VectorXd& f = f_pts_[i];
    const Eigen::VectorXd& df = df_pts_[i];
    if (!rod) {
      const Vec4 q = C * f;
      const Vec4 qd = ctx_.rate_scale * (C * df);
      const Vec3 pred = 2.0 * (quat_mul(quat_conj(Quaternion(q)), Quaternion(qd))).eta +
                        rotate_vector(Quaternion(q), w_ie) + b_g;
      r.segment<3>(row) = s * wg * (y - pred);
      if (jac) {
        const Mat34 d_q = -s * wg * (2.0 * conj_product_dq(qd) + rotate_dq(q, w_ie));
        const Mat34 d_qd = -s * wg * 2.0 * conj_product_dp(q);
        add_coef_block(jac->block(row, 0, 3, n_coef_), d_q, f, 4);
        add_coef_block(jac->block(row, 0, 3, n_coef_), ctx_.rate_scale * d_qd, df, 4);
      }
    } else {
      const Vec3 g = C * f;
      const Vec3 gd = ctx_.rate_scale * (C * df);
      if (jac && g.norm() > guard_) throw SingularRotation("Rodrigues update exceeds the guard");
      const Vec4 dq = rodrigues_to_quat(g).coeffs();
      const Vec3 pred = rodrigues_rate(g, gd) + rotate_vector(Quaternion(dq), w_ref) + b_g;
      r.segment<3>(row) = s * wg * (y - pred);
      if (jac) {
        const double n2 = 4.0 + g.squaredNorm();
        const Vec3 num = 4.0 * gd - 2.0 * g.cross(gd);
        const Mat3 dk_dg = 2.0 * skew(gd) / n2 - num * (2.0 * g.transpose()) / (n2 * n2);
        const Mat3 dk_dgd = (4.0 * Mat3::Identity() - 2.0 * skew(g)) / n2;
        const Mat3 d_g = -s * wg * (dk_dg + rotate_dq(dq, w_ref) * rodrigues_quat_jacobian(g));
        const Mat3 d_gd = -s * wg * dk_dgd;
        add_coef_block(jac->block(row, 0, 3, n_coef_), d_g, f, 3);
        add_coef_block(jac->block(row, 0, 3, n_coef_), ctx_.rate_scale * d_gd, df, 3);
      }
    }
    if (jac) jac->block<3, 3>(row, ig) = -s * wg;
  }

  const Mat3 wa = weights_.W_a.transpose();
  for (std::size_t k = 0; k < f_acc_.size(); ++k, row += 3) {
    const Vec4 q = attitude(f_acc_[k], nullptr);
    r.segment<3>(row) = wa * (ctx_.accel_y[k] + rotate_vector(Quaternion(q), gamma) - b_a);
    if (jac) {
      coef_from_q(row, wa * rotate_dq(q, gamma), f_acc_[k]);
      jac->block<3, 3>(row, ia) = -wa;
    }
  }
  const Mat3 wm = weights_.W_m.transpose();
  for (std::size_t k = 0; k < f_mag_.size(); ++k, row += 3) {
    const Vec4 q = attitude(f_mag_[k], nullptr);
    r.segment<3>(row) = wm * (ctx_.mag_y[k] - rotate_vector(Quaternion(q), mag));
    if (jac) coef_from_q(row, -wm * rotate_dq(q, mag), f_mag_[k]);
  }
}

void WindowProblem::constraints(const Eigen::VectorXd& x, Eigen::VectorXd& c, Eigen::MatrixXd* jac) const {
  const Eigen::Map<const Eigen::MatrixXd> D(x.data(), dim_, order_ + 1);
  c.resize(static_cast<Eigen::Index>(f_pts_.size()));
  if (jac) jac->setZero(c.size(), num_params());
  for (std::size_t i = 0; i < f_pts_.size(); ++i) {
    const Vec4 q = D * f_pts_[i];
    c(static_cast<Eigen::Index>(i)) = q.squaredNorm() - 1.0;
    if (jac) {
      for (Eigen::Index j = 0; j < f_pts_[i].size(); ++j) {
        jac->block<1, 4>(static_cast<Eigen::Index>(i), 4 * j) = 2.0 * f_pts_[i](j) * q.transpose();
      }
    }
  }
}

double WindowProblem::objective(const Eigen::VectorXd& x) const {
  Eigen::VectorXd r;
  residuals(x, r, nullptr);
  return r.squaredNorm();
}

LeastSquaresProblem WindowProblem::as_problem() const {
  LeastSquaresProblem p;
  p.residuals = [this](const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* j) { residuals(x, r, j); };
  if (kind_ == Parameterization::quaternion) {
    p.constraints = [this](const Eigen::VectorXd& x, Eigen::VectorXd& c, Eigen::MatrixXd* j) { constraints(x, c, j); };
  }
  return p;
}

double objective(const WindowProblem& problem, const Eigen::VectorXd& params) { return problem.objective(params); }

// ---------------------------------------------------------------------------

Quaternion WindowSolution::raw_attitude_tau(double tau) const {
  if (kind == Parameterization::quaternion) return Quaternion(Vec4(series_eval(coeffs, tau)));
  return quat_mul(q_ref, rodrigues_to_quat(series_eval(coeffs, tau)));
}

Quaternion WindowSolution::attitude(double t) const {
  return normalize(raw_attitude_tau(affine_time_map(t, t0, tM)));
}

namespace {

double gyro_weight_scale(const EstimatorConfig& cfg, const ImuWindow& w) {
  if (!cfg.gyro_psd_weighting) return 1.0;
  const double dt = (w.tM() - w.t0()) / static_cast<double>(w.samples.size() - 1);
  return 1.0 / std::sqrt(dt);
}

ChebyshevSeries linear_init(const WindowContext& ctx, const WindowPrior& prior, const EstimatorConfig& cfg,
                            bool* rank_deficient) {
  const LinearSystem sys = build_linear_system(ctx, prior, cfg.cheb_order, cfg.earth);
  ChebyshevSeries D = solve_homogeneous(sys, rank_deficient);
  if (series_eval(D, -1.0).dot(prior.q0.coeffs()) < 0.0) D.coeffs = -D.coeffs;
  return D;
}

}  // namespace

WindowSolution solve_window(Parameterization kind, const ImuWindow& window, const WindowPrior& prior,
                            const EstimatorConfig& cfg, const std::optional<ChebyshevSeries>& init) {
  const WindowContext ctx = build_context(window, cfg.points(), cfg.efh_degree, cfg.efh_extension);
  const WeightSet weights = build_weights(prior, cfg.noise);

  WindowSolution sol;
  sol.kind = kind;
  sol.t0 = ctx.t0;
  sol.tM = ctx.tM;
  ChebyshevSeries D;
  if (init) {
    D = *init;
    if (series_eval(D, -1.0).dot(prior.q0.coeffs()) < 0.0) D.coeffs = -D.coeffs;
  } else {
    D = linear_init(ctx, prior, cfg, &sol.init_rank_deficient);
  }

  ChebyshevSeries start;
  if (kind == Parameterization::quaternion) {
    start = D;
  } else {
    Quaternion ref = normalize(Quaternion(Vec4(series_eval(D, -1.0))));
    if (ref.coeffs().dot(prior.q0.coeffs()) < 0.0) ref = -ref;
    sol.q_ref = ref;
    start = rod_coeffs_from_quat(D, ref, cfg.cheb_order, cfg.rod_fit_terms);
  }

  const WindowProblem problem(kind, ctx, prior, weights, cfg.cheb_order, cfg.earth, sol.q_ref,
                              gyro_weight_scale(cfg, window), cfg.rod_guard);
  const Eigen::VectorXd x0 = problem.pack(start, prior.b_a0, prior.b_g0);
  sol.report = solve_constrained(problem.as_problem(), x0, cfg.lm, cfg.al);
  sol.coeffs = problem.coeffs(sol.report.x);
  sol.b_a = sol.report.x.segment<3>(problem.num_params() - 6);
  sol.b_g = sol.report.x.tail<3>();
  sol.objective = sol.report.cost;
  if (kind == Parameterization::rodrigues) {
    for (int i = 0; i < ctx.points(); ++i) {
      if (series_eval(sol.coeffs, ctx.rule.points(i)).norm() > cfg.rod_guard) {
        throw SingularRotation("Rodrigues update exceeds the guard at the solution");
      }
    }
  }
  return sol;
}

WindowSolution solve_qua_window(const ImuWindow& window, const WindowPrior& prior, const EstimatorConfig& config,
                                const std::optional<ChebyshevSeries>& init) {
  return solve_window(Parameterization::quaternion, window, prior, config, init);
}

WindowSolution solve_rod_window(const ImuWindow& window, const WindowPrior& prior, const EstimatorConfig& config,
                                const std::optional<ChebyshevSeries>& init) {
  return solve_window(Parameterization::rodrigues, window, prior, config, init);
}

// ---------------------------------------------------------------------------

Quaternion EstimateTrack::attitude_at(double time) const {
  for (const WindowSolution& w : windows) {
    if (time >= w.t0 - 1e-12 && time <= w.tM + 1e-12) return w.attitude(std::clamp(time, w.t0, w.tM));
  }
  if (t.empty()) throw DomainError("empty track");
  const auto it = std::lower_bound(t.begin(), t.end(), time);
  std::size_t i = static_cast<std::size_t>(it - t.begin());
  if (i == t.size()) i = t.size() - 1;
  if (i > 0 && std::abs(t[i - 1] - time) < std::abs(t[i] - time)) --i;
  return q[i];
}

std::vector<std::pair<std::size_t, std::size_t>> window_partition(std::size_t n, std::size_t per_window) {
  if (per_window < 1) throw DomainError("window must span at least one sample interval");
  if (n < 2) throw DomainError("need at least two samples");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t first = 0;
  while (first + per_window <= n - 1) {
    out.emplace_back(first, first + per_window);
    first += per_window;
  }
  const std::size_t remainder = n - 1 - first;
  if (remainder > 0) {
    if (!out.empty() && 5 * remainder < per_window) {
      out.back().second = n - 1;
    } else {
      out.emplace_back(first, n - 1);
    }
  }
  return out;
}

namespace {

std::vector<ImuSample> with_detectors(std::span<const ImuSample> samples, const EstimatorConfig& cfg) {
  std::vector<ImuSample> out(samples.begin(), samples.end());
  for (ImuSample& s : out) apply_detectors(s, cfg.earth, cfg.detectors);
  return out;
}

std::size_t samples_per_window(std::span<const ImuSample> samples, double window_size) {
  const double dt = (samples.back().t - samples.front().t) / static_cast<double>(samples.size() - 1);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(window_size / dt)));
}

// Shared sliding loop; `solve` produces the solution for window w.
template <typename Solve>
EstimateTrack slide(std::span<const ImuSample> raw, const WindowPrior& initial, const EstimatorConfig& cfg,
                    Solve&& solve) {
  const auto start_clock = std::chrono::steady_clock::now();
  if (raw.size() < 2) throw DomainError("need at least two samples");
  const std::vector<ImuSample> samples = with_detectors(raw, cfg);
  const auto parts = window_partition(samples.size(), samples_per_window(samples, cfg.window_size));

  EstimateTrack track;
  WindowPrior prior = initial;
  prior.q0 = normalize(prior.q0);
  for (std::size_t w = 0; w < parts.size(); ++w) {
    const auto [first, last] = parts[w];
    const std::size_t skip = w == 0 ? 0 : 1;
    const ImuWindow window =
        make_window(std::span<const ImuSample>(samples).subspan(first, last - first + 1), skip);
    WindowSolution sol;
    try {
      sol = solve(w, window, prior);
    } catch (const WindowError&) {
      throw;
    } catch (const Error& e) {
      throw WindowError(w, e.what());
    }
    if (!sol.report.converged) ++track.nonconverged_windows;

    std::vector<Quaternion> q_track;
    q_track.reserve(window.samples.size());
    for (const ImuSample& s : window.samples) {
      Quaternion q = sol.attitude(s.t);
      if (!q_track.empty() && q.coeffs().dot(q_track.back().coeffs()) < 0.0) q = -q;
      q_track.push_back(q);
    }
    const std::vector<Mat9> covs = covariance_along_estimate(window, q_track, prior.P0, cfg.noise, cfg.earth);

    for (std::size_t i = skip; i < window.samples.size(); ++i) {
      track.t.push_back(window.samples[i].t);
      track.q.push_back(canonical(q_track[i]));
      track.b_a.push_back(sol.b_a);
      track.b_g.push_back(sol.b_g);
      track.p_diag.push_back(covs[i].diagonal());
    }

    prior.q0 = q_track.back();
    prior.b_a0 = sol.b_a;
    prior.b_g0 = sol.b_g;
    prior.P0 = covs.back();
    track.windows.push_back(std::move(sol));
  }
  track.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_clock).count();
  return track;
}

}  // namespace

EstimateTrack run_sliding(std::span<const ImuSample> samples, const WindowPrior& initial, const EstimatorConfig& cfg,
                          Parameterization kind) {
  return slide(samples, initial, cfg, [&](std::size_t, const ImuWindow& window, const WindowPrior& prior) {
    return solve_window(kind, window, prior, cfg);
  });
}

EstimateTrack run_sliding_fitted(std::span<const ImuSample> samples, const WindowPrior& initial,
                                 const EstimatorConfig& cfg, const EstimateTrack& short_track) {
  return slide(samples, initial, cfg, [&](std::size_t, const ImuWindow& window, const WindowPrior& prior) {
    const double t0 = window.t0();
    const double tM = window.tM();
    const ChebyshevSeries D = quat_coeffs_from_profile(
        [&](double tau) { return short_track.attitude_at(affine_time_unmap(tau, t0, tM)); }, cfg.cheb_order,
        cfg.rod_fit_terms);
    return solve_window(Parameterization::quaternion, window, prior, cfg, D);
  });
}

}  // namespace attestpo
