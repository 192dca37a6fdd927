#include <Eigen/Eigenvalues>

#include "attestpo/errors.hpp"
#include "attestpo/mekf.hpp"
#include "scenario.hpp"
#include "support.hpp"

using namespace attestpo;
using namespace attestpo::testing;

namespace {

Mat9 random_spd(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Mat9 m;
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = n(rng);
  return m * m.transpose() + 1e-3 * Mat9::Identity();
}

double min_eigenvalue(const Mat9& P) { return Eigen::SelfAdjointEigenSolver<Mat9>(P).eigenvalues().minCoeff(); }

Quaternion inject(const Quaternion& q, const Vec3& dpsi) { return normalize(quat_mul(Quaternion(1.0, 0.5 * dpsi), q)); }

ConingConfig stationary() {
  ConingConfig cfg = noise_free_coning(1.0);
  cfg.coning_angle = 0.0;
  return cfg;
}

}  // namespace

TEST(Dynamics, Structure) {
  std::mt19937_64 rng(1);
  const Quaternion q = random_unit_quat(rng);
  const DynamicsMatrices m = dynamics_matrices(q);
  const Mat3 c_bn = quat_to_rotmat(q).transpose();
  Mat9 B = Mat9::Zero();
  B.block<3, 3>(0, 6) = -c_bn;
  EXPECT_EQ(m.B, B);
  Mat9 G = Mat9::Identity();
  G.block<3, 3>(0, 0) = -c_bn;
  EXPECT_EQ(m.G, G);

  const DynamicsMatrices id = dynamics_matrices(Quaternion::identity());
  EXPECT_EQ(Mat3(id.B.block<3, 3>(0, 6)), -Mat3::Identity());
}

TEST(Dynamics, ProcessNoise) {
  NoiseSpec n;
  n.R_g = 2.0 * Mat3::Identity();
  n.Q_ba = 3.0 * Mat3::Identity();
  n.Q_bg = 5.0 * Mat3::Identity();
  const Mat9 Q = process_noise(n, 0.1);
  EXPECT_NEAR(Q(0, 0), 0.02, 1e-15);
  EXPECT_NEAR(Q(4, 4), 0.3, 1e-15);
  EXPECT_NEAR(Q(8, 8), 0.5, 1e-15);
  EXPECT_EQ(Q(0, 3), 0.0);
}

TEST(PredictCov, Examples) {
  const Mat9 Q = Mat9::Zero();
  EXPECT_EQ(predict_cov(Mat9::Zero(), Quaternion::identity(), Q, 0.01), Mat9::Zero());
  // identity attitude: attitude error picks up −T times the gyro bias error
  const Mat9 P = predict_cov(Mat9::Identity(), Quaternion::identity(), Q, 0.5);
  EXPECT_NEAR(P(0, 0), 1.25, 1e-15);
  EXPECT_NEAR(P(0, 6), -0.5, 1e-15);
  EXPECT_NEAR(P(3, 3), 1.0, 1e-15);
  EXPECT_THROW(predict_cov(Mat9::Identity(), Quaternion::identity(), Q, 0.0), DomainError);
  EXPECT_THROW(predict_cov(Mat9::Identity(), Quaternion::identity(), Q, -1.0), DomainError);
}

TEST(PredictCov, TraceNeverDecreasesAndStaysPsd) {
  std::mt19937_64 rng(2);
  const NoiseSpec noise = default_noise_spec(100.0);
  for (int trial = 0; trial < 100; ++trial) {
    // bias-to-attitude coupling can shrink the trace for correlated P; a block-diagonal P cannot
    Mat9 P = random_spd(rng);
    P.block<3, 6>(0, 3).setZero();
    P.block<6, 3>(3, 0).setZero();
    P.block<3, 3>(3, 6).setZero();
    P.block<3, 3>(6, 3).setZero();
    const Mat9 next = predict_cov(P, random_unit_quat(rng), process_noise(noise, 0.01), 0.01);
    EXPECT_GE(next.trace(), P.trace() - 1e-12);
    EXPECT_EQ(next, next.transpose());
    EXPECT_GE(min_eigenvalue(next), -1e-12);
  }
}

TEST(Measurement, JacobiansMatchFiniteDifferences) {
  std::mt19937_64 rng(3);
  const EarthModel model = default_earth_model();
  for (int trial = 0; trial < 10; ++trial) {
    const Quaternion q = random_unit_quat(rng);
    const Vec3 b = random_vec(rng, 0.1);
    const MeasurementMatrices h = measurement_matrices(q, model);
    const double eps = 1e-6;
    for (int j = 0; j < 3; ++j) {
      const Vec3 d = Vec3::Unit(j) * eps;
      const Vec3 fa = (predict_accel(inject(q, d), b, model) - predict_accel(inject(q, -d), b, model)) / (2 * eps);
      const Vec3 fm = (predict_mag(inject(q, d), model) - predict_mag(inject(q, -d), model)) / (2 * eps);
      EXPECT_LT((fa - h.H_a.col(j)).norm(), 1e-4 * std::max(1.0, fa.norm()));
      EXPECT_LT((fm - h.H_m.col(j)).norm(), 1e-4 * std::max(1.0, fm.norm()));
      const Vec3 fb = (predict_accel(q, b + d, model) - predict_accel(q, b - d, model)) / (2 * eps);
      EXPECT_LT((fb - h.H_a.col(3 + j)).norm(), 1e-8);
    }
    EXPECT_EQ(Mat3(h.H_m.block<3, 3>(0, 3)), Mat3::Zero());
    EXPECT_EQ(Mat3(h.H_a.block<3, 3>(0, 6)), Mat3::Zero());
  }
}

TEST(UpdateCov, Examples) {
  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  EXPECT_NEAR(update_cov(one, one, one)(0, 0), 0.5, 1e-15);

  std::mt19937_64 rng(4);
  const Eigen::MatrixXd P = random_spd(rng);
  EXPECT_LT(max_abs_diff(update_cov(P, Eigen::MatrixXd::Zero(3, 9), Eigen::MatrixXd::Identity(3, 3)), P), 1e-15);

  const MeasurementMatrices h = measurement_matrices(random_unit_quat(rng), default_earth_model());
  const Eigen::MatrixXd weak = update_cov(P, h.H_a, 1e12 * Eigen::MatrixXd::Identity(3, 3));
  EXPECT_LT(max_abs_diff(weak, P), 1e-8 * P.norm());

  EXPECT_THROW(update_cov(Eigen::MatrixXd::Zero(9, 9), h.H_a, Eigen::MatrixXd::Zero(3, 3)), SingularInnovation);
}

TEST(UpdateCov, ShrinksAndStaysPsd) {
  std::mt19937_64 rng(5);
  const NoiseSpec noise = default_noise_spec(100.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat9 P = random_spd(rng);
    const MeasurementMatrices h = measurement_matrices(random_unit_quat(rng), default_earth_model());
    const Mat9 up = update_cov(P, h.H_a, noise.R_a);
    EXPECT_LE(up.trace(), P.trace() + 1e-12);
    EXPECT_GE(min_eigenvalue(up), -1e-9 * P.norm());
    EXPECT_EQ(up, up.transpose());
  }
}

TEST(EkfStep, StationaryFixedPoint) {
  const ConingConfig sim = stationary();
  const SimulatedData d = synthesize(sim);
  const WindowPrior p = exact_prior(d);
  EkfState s{p.q0, p.b_a0, p.b_g0, p.P0};
  for (std::size_t i = 1; i <= 100; ++i) {
    s = ekf_step(s, d.samples[i], default_noise_spec(100.0), sim.earth, 0.01, &d.samples[i - 1].y_g);
    EXPECT_LT(attitude_error(d.truth[i].q, s.q).norm(), 1e-8);
    EXPECT_LT((s.b_a - d.truth[i].b_a).norm(), 1e-8);
    EXPECT_LT((s.b_g - d.truth[i].b_g).norm(), 1e-8);
  }
}

TEST(EkfStep, TracksNoiseFreeConing) {
  const ConingConfig sim = noise_free_coning(2.0);
  const SimulatedData d = synthesize(sim);
  const EstimateTrack t = run_ekf(d.samples, exact_prior(d), estimator_for(sim));
  ASSERT_EQ(t.size(), d.samples.size());
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_LT(attitude_error(d.truth[i].q, t.q[i]).norm(), 1e-4);
}

TEST(EkfStep, DisabledDetectorsMatchAlwaysValidFlags) {
  const ConingConfig sim = noise_free_coning(0.5);
  const SimulatedData d = synthesize(sim);
  EstimatorConfig open = estimator_for(sim);
  open.detectors.eps_a = std::numeric_limits<double>::infinity();
  open.detectors.eps_m = std::numeric_limits<double>::infinity();
  const EstimateTrack a = run_ekf(d.samples, exact_prior(d), open);

  const WindowPrior p = exact_prior(d);
  EkfState s{p.q0, p.b_a0, p.b_g0, p.P0};
  s = ekf_update(s, d.samples[0], open.noise, open.earth);
  for (std::size_t i = 1; i < d.samples.size(); ++i) {
    ImuSample valid = d.samples[i];
    valid.accel_valid = valid.mag_valid = true;
    s = ekf_step(s, valid, open.noise, open.earth, 0.01, &d.samples[i - 1].y_g);
  }
  EXPECT_LT(quat_distance(a.q.back(), s.q), 1e-15);
  EXPECT_LT(max_abs_diff(a.p_diag.back(), s.P.diagonal()), 1e-18);
}

TEST(EkfStep, SkipsInvalidMeasurements) {
  const ConingConfig sim = noise_free_coning(0.1);
  const SimulatedData d = synthesize(sim);
  const WindowPrior p = exact_prior(d);
  const EkfState s{p.q0, p.b_a0, p.b_g0, p.P0};
  ImuSample blind = d.samples[1];
  blind.accel_valid = blind.mag_valid = false;
  const EkfState out = ekf_step(s, blind, sim.noise, sim.earth, 0.01);
  EXPECT_EQ(out.P, predict_cov(p.P0, p.q0, process_noise(sim.noise, 0.01), 0.01));
}

TEST(CovarianceAlongEstimate, MatchesEkfWithoutMeasurements) {
  const ConingConfig sim = noise_free_coning(0.1);
  const SimulatedData d = synthesize(sim);
  ImuWindow w = window_of(d, 0, 10);
  for (ImuSample& s : w.samples) s.accel_valid = s.mag_valid = false;
  const WindowPrior p = exact_prior(d);
  EkfState s{p.q0, p.b_a0, p.b_g0, p.P0};
  std::vector<Quaternion> track{s.q};
  std::vector<Mat9> expected{s.P};
  for (std::size_t i = 1; i < w.samples.size(); ++i) {
    s = ekf_step(s, w.samples[i], sim.noise, sim.earth, 0.01);
    track.push_back(s.q);
    expected.push_back(s.P);
  }
  const std::vector<Mat9> got = covariance_along_estimate(w, track, p.P0, sim.noise, sim.earth);
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_LT(max_abs_diff(got[i], expected[i]), 1e-18);
}

TEST(CovarianceAlongEstimate, ManualRecursionWithSeamSkip) {
  ConingConfig sim = noise_free_coning(0.1);
  sim.noise = default_noise_spec(sim.sample_rate);
  const SimulatedData d = synthesize(sim);
  const ImuWindow w = make_window(std::span<const ImuSample>(d.samples).subspan(0, 11), 1);
  std::vector<Quaternion> track;
  for (std::size_t i = 0; i <= 10; ++i) track.push_back(d.truth[i].q);
  const Mat9 P0 = 1e-3 * Mat9::Identity();
  const std::vector<Mat9> got = covariance_along_estimate(w, track, P0, sim.noise, sim.earth);
  EXPECT_EQ(got[0], P0);
  Mat9 P = P0;
  for (std::size_t i = 1; i <= 10; ++i) {
    P = predict_cov(P, track[i - 1], process_noise(sim.noise, 0.01), w.samples[i].t - w.samples[i - 1].t);
    const MeasurementMatrices h = measurement_matrices(track[i], sim.earth);
    P = update_cov(update_cov(P, h.H_a, sim.noise.R_a), h.H_m, sim.noise.R_m);
    EXPECT_LT(max_abs_diff(got[i], P), 1e-15);
    EXPECT_EQ(got[i], got[i].transpose());
    EXPECT_GE(min_eigenvalue(got[i]), -1e-12);
  }
  EXPECT_THROW(covariance_along_estimate(w, std::vector<Quaternion>(3), P0, sim.noise, sim.earth), MismatchedTracks);
}

TEST(RunEkf, RejectsNonMonotoneTime) {
  const ConingConfig sim = noise_free_coning(0.1);
  SimulatedData d = synthesize(sim);
  d.samples[5].t = d.samples[4].t;
  EXPECT_THROW(run_ekf(d.samples, exact_prior(d), estimator_for(sim)), NonMonotoneTime);
}
