#include "attestpo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <string>

#include <omp.h>

#include "attestpo/errors.hpp"
#include "attestpo/mekf.hpp"

namespace attestpo {

RunErrors track_errors(const EstimateTrack& estimate, const std::vector<TruthSample>& truth) {
  if (estimate.size() != truth.size()) throw MismatchedTracks("estimate and truth lengths differ");
  RunErrors e;
  const std::size_t n = truth.size();
  e.t.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(estimate.t[k] - truth[k].t) > 1e-9) throw MismatchedTracks("timestamps differ");
    e.t.push_back(truth[k].t);
    e.attitude.push_back(attitude_error(truth[k].q, estimate.q[k]));
    e.accel_bias.push_back(truth[k].b_a - estimate.b_a[k]);
    e.gyro_bias.push_back(truth[k].b_g - estimate.b_g[k]);
    const Vec3 de = quat_to_euler(truth[k].q).as_vector() - quat_to_euler(estimate.q[k]).as_vector();
    e.euler.push_back(de.unaryExpr([](double a) { return wrap_pi(a); }));
    const Vec9& p = estimate.p_diag[k];
    e.sigma.push_back(Vec3(std::sqrt(p.head<3>().sum()), std::sqrt(p.segment<3>(3).sum()),
                           std::sqrt(p.tail<3>().sum())));
  }
  return e;
}

namespace {

void check_aligned(const std::vector<RunErrors>& runs) {
  if (runs.empty()) throw MismatchedTracks("no runs");
  for (const RunErrors& r : runs) {
    if (r.t.size() != runs.front().t.size()) throw MismatchedTracks("runs have different lengths");
    for (std::size_t k = 0; k < r.t.size(); ++k) {
      if (std::abs(r.t[k] - runs.front().t[k]) > 1e-9) throw MismatchedTracks("runs have different timestamps");
    }
  }
}

template <typename Get>
ErrorTracks average(const std::vector<RunErrors>& runs, Get get) {
  check_aligned(runs);
  ErrorTracks out;
  out.t = runs.front().t;
  const std::size_t n = out.t.size();
  out.attitude.assign(n, 0.0);
  out.accel_bias.assign(n, 0.0);
  out.gyro_bias.assign(n, 0.0);
  for (const RunErrors& r : runs) {
    for (std::size_t k = 0; k < n; ++k) {
      const Vec3 v = get(r, k);
      out.attitude[k] += v(0);
      out.accel_bias[k] += v(1);
      out.gyro_bias[k] += v(2);
    }
  }
  const double inv = 1.0 / static_cast<double>(runs.size());
  for (std::size_t k = 0; k < n; ++k) {
    out.attitude[k] *= inv;
    out.accel_bias[k] *= inv;
    out.gyro_bias[k] *= inv;
  }
  return out;
}

}  // namespace

ErrorTracks avg_abs_error(const std::vector<RunErrors>& runs) {
  return average(runs, [](const RunErrors& r, std::size_t k) {
    return Vec3(r.attitude[k].norm(), r.accel_bias[k].norm(), r.gyro_bias[k].norm());
  });
}

ErrorTracks avg_sigma(const std::vector<RunErrors>& runs) {
  return average(runs, [](const RunErrors& r, std::size_t k) { return r.sigma[k]; });
}

double relative_rotation_angle(const Quaternion& q_t, const Quaternion& q_0) {
  const Quaternion rel = quat_mul(quat_conj(q_0), q_t);
  // equals 2·arccos(|s|) for unit quaternions, without the loss of precision near zero
  return 2.0 * std::atan2(rel.eta.norm(), std::abs(rel.s));
}

double rotation_angle_error(double alpha_ref, double alpha_est) { return std::abs(alpha_ref - alpha_est); }

double consistency_fraction(const std::vector<double>& error, const std::vector<double>& sigma) {
  if (error.size() != sigma.size()) throw MismatchedTracks("error and sigma tracks differ in length");
  if (error.empty()) throw MismatchedTracks("empty tracks");
  std::size_t inside = 0;
  for (std::size_t k = 0; k < error.size(); ++k) inside += error[k] <= 2.0 * sigma[k] ? 1 : 0;
  return static_cast<double>(inside) / static_cast<double>(error.size());
}

Vec3 final_euler_rmse(const std::vector<RunErrors>& runs) {
  if (runs.empty()) throw MismatchedTracks("no runs");
  Vec3 acc = Vec3::Zero();
  for (const RunErrors& r : runs) acc += r.euler.back().cwiseAbs2();
  return (acc / static_cast<double>(runs.size())).cwiseSqrt();
}

double settle_time(const std::vector<double>& t, const std::vector<double>& error, double threshold) {
  if (t.size() != error.size()) throw MismatchedTracks("time and error tracks differ in length");
  std::size_t k = error.size();
  while (k > 0 && error[k - 1] < threshold) --k;
  if (k == error.size()) return std::numeric_limits<double>::infinity();
  return t[k];
}

EstimatorConfig estimator_config_for(const ConingConfig& sim, double window_size, int order) {
  EstimatorConfig c;
  c.window_size = window_size;
  c.cheb_order = order;
  c.earth = sim.earth;
  c.noise = sim.noise;
  c.detectors = sim.detectors;
  return c;
}

std::vector<AlgorithmSpec> default_algorithms(const ConingConfig& sim) {
  const EstimatorConfig c = estimator_config_for(sim);
  return {{"qua", AlgorithmKind::qua, c}, {"rod", AlgorithmKind::rod, c}, {"ekf", AlgorithmKind::ekf, c}};
}

const AlgorithmMetrics& RunMetrics::find(const std::string& name) const {
  for (const AlgorithmMetrics& m : algorithms) {
    if (m.name == name) return m;
  }
  throw DomainError("no algorithm named " + name);
}

bool RunMetrics::all_converged() const {
  return std::all_of(algorithms.begin(), algorithms.end(),
                     [](const AlgorithmMetrics& m) { return m.failed_runs == 0 && m.nonconverged_runs == 0; });
}

std::uint64_t replication_seed(std::uint64_t base, int run) {
  // splitmix64 step so neighbouring runs get unrelated streams
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(run + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

WindowPrior monte_carlo_prior(const MonteCarloConfig& cfg, const SimulatedData& data, std::uint64_t seed) {
  std::mt19937_64 engine(seed ^ 0x2545f4914f6cdd1dULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  const TruthSample& t0 = data.truth.front();
  EulerAngles e = quat_to_euler(t0.q);
  e.roll += cfg.attitude_std(0) * normal(engine);
  e.yaw += cfg.attitude_std(1) * normal(engine);
  e.pitch += cfg.attitude_std(2) * normal(engine);

  WindowPrior prior;
  prior.q0 = euler_to_quat(e);
  prior.P0 = Mat9::Zero();
  const Vec3 att_var = cfg.attitude_std.cwiseAbs2().cwiseMax(1e-12);
  prior.P0.block<3, 3>(0, 0) = att_var.asDiagonal();
  const auto bias_var = [&](const Vec3& b) {
    return (cfg.bias_sigma_factor * b.cwiseAbs()).cwiseMax(1e-4).cwiseAbs2().eval();
  };
  prior.P0.block<3, 3>(3, 3) = bias_var(t0.b_a).asDiagonal();
  prior.P0.block<3, 3>(6, 6) = bias_var(t0.b_g).asDiagonal();
  return prior;
}

EstimateTrack run_algorithm(const AlgorithmSpec& spec, const std::vector<ImuSample>& samples,
                            const WindowPrior& prior) {
  switch (spec.kind) {
    case AlgorithmKind::ekf:
      return run_ekf(samples, prior, spec.config);
    case AlgorithmKind::rod:
      return run_sliding(samples, prior, spec.config, Parameterization::rodrigues);
    case AlgorithmKind::qua:
      break;
  }
  if (!spec.config.fit_init_from_short_windows) {
    return run_sliding(samples, prior, spec.config, Parameterization::quaternion);
  }
  EstimatorConfig short_cfg = spec.config;
  short_cfg.window_size = spec.config.short_window_size;
  short_cfg.cheb_order = spec.config.short_window_order;
  short_cfg.quad_points = 0;
  const EstimateTrack short_track = run_sliding(samples, prior, short_cfg, Parameterization::quaternion);
  EstimateTrack track = run_sliding_fitted(samples, prior, spec.config, short_track);
  track.wall_seconds += short_track.wall_seconds;
  track.nonconverged_windows += short_track.nonconverged_windows;
  return track;
}

namespace {

struct AlgorithmOutcome {
  bool ok = false;
  bool converged = false;
  std::string message;
  RunErrors errors;
  double wall_seconds = 0.0;
};

struct Replication {
  std::uint64_t seed = 0;
  std::vector<AlgorithmOutcome> outcomes;
};

Replication run_replication(const MonteCarloConfig& cfg, int run) {
  Replication rep;
  rep.seed = replication_seed(cfg.seed, run);
  ConingConfig sim = cfg.sim;
  sim.rng_seed = rep.seed;
  const SimulatedData data = synthesize(sim);
  const WindowPrior prior = monte_carlo_prior(cfg, data, rep.seed);
  for (const AlgorithmSpec& spec : cfg.algorithms) {
    AlgorithmOutcome out;
    try {
      const EstimateTrack track = run_algorithm(spec, data.samples, prior);
      out.errors = track_errors(track, data.truth);
      out.wall_seconds = track.wall_seconds;
      out.converged = track.converged();
      out.ok = true;
    } catch (const std::exception& e) {
      out.message = e.what();
    }
    rep.outcomes.push_back(std::move(out));
  }
  return rep;
}

RunMetrics reduce(const MonteCarloConfig& cfg, const std::vector<Replication>& reps, int threads) {
  RunMetrics m;
  m.runs = static_cast<int>(reps.size());
  m.threads = threads;
  for (const Replication& r : reps) m.seeds.push_back(r.seed);
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    AlgorithmMetrics am;
    am.name = cfg.algorithms[a].name;
    std::vector<RunErrors> ok;
    double wall = 0.0;
    for (std::size_t r = 0; r < reps.size(); ++r) {
      const AlgorithmOutcome& o = reps[r].outcomes[a];
      if (!o.ok) {
        ++am.failed_runs;
        am.failures.push_back("run " + std::to_string(r) + ": " + o.message);
        continue;
      }
      if (!o.converged) ++am.nonconverged_runs;
      wall += o.wall_seconds;
      ok.push_back(o.errors);
    }
    if (!ok.empty()) {
      am.error = avg_abs_error(ok);
      am.sigma = avg_sigma(ok);
      am.final_rmse = final_euler_rmse(ok);
      am.attitude_consistency = consistency_fraction(am.error.attitude, am.sigma.attitude);
      am.accel_bias_consistency = consistency_fraction(am.error.accel_bias, am.sigma.accel_bias);
      am.gyro_bias_consistency = consistency_fraction(am.error.gyro_bias, am.sigma.gyro_bias);
      am.mean_wall_seconds = wall / static_cast<double>(ok.size());
    }
    m.algorithms.push_back(std::move(am));
  }
  return m;
}

void validate(const MonteCarloConfig& cfg) {
  if (cfg.runs < 1) throw DomainError("replication count must be at least 1");
  if (cfg.algorithms.empty()) throw DomainError("no algorithms configured");
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ATTESTPO_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

RunMetrics monte_carlo(const MonteCarloConfig& config) {
  validate(config);
  const int threads = resolve_threads(config.threads);
  std::vector<Replication> reps(static_cast<std::size_t>(config.runs));
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int r = 0; r < config.runs; ++r) reps[static_cast<std::size_t>(r)] = run_replication(config, r);
  return reduce(config, reps, threads);
}

RunMetrics monte_carlo_serial(const MonteCarloConfig& config) {
  validate(config);
  std::vector<Replication> reps;
  for (int r = 0; r < config.runs; ++r) reps.push_back(run_replication(config, r));
  return reduce(config, reps, 1);
}

}  // namespace attestpo
