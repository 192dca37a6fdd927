#include "attestpo/mekf.hpp"

#include <chrono>

#include <Eigen/LU>

#include "attestpo/errors.hpp"

namespace attestpo {
namespace {

Mat9 symmetrize(const Mat9& P) { return 0.5 * (P + P.transpose()); }

Mat3 body_to_nav(const Quaternion& q) { return quat_to_rotmat(q).transpose(); }

}  // namespace

DynamicsMatrices dynamics_matrices(const Quaternion& q_ref) {
  const Mat3 c_bn = body_to_nav(q_ref);
  DynamicsMatrices m;
  m.B.block<3, 3>(0, 6) = -c_bn;
  m.G.block<3, 3>(0, 0) = -c_bn;
  return m;
}

Mat9 process_noise(const NoiseSpec& noise, double T) {
  Mat9 Q = Mat9::Zero();
  Q.block<3, 3>(0, 0) = noise.R_g * T * T;
  Q.block<3, 3>(3, 3) = noise.Q_ba * T;
  Q.block<3, 3>(6, 6) = noise.Q_bg * T;
  return Q;
}

Mat9 predict_cov(const Mat9& P, const Quaternion& q_ref, const Mat9& Q, double T) {
  if (!(T > 0.0)) throw DomainError("step must be positive");
  const DynamicsMatrices m = dynamics_matrices(q_ref);
  const Mat9 phi = Mat9::Identity() + m.B * T;
  return symmetrize(phi * P * phi.transpose() + m.G * Q * m.G.transpose());
}

MeasurementMatrices measurement_matrices(const Quaternion& q_ref, const EarthModel& model) {
  const Mat3 c = quat_to_rotmat(q_ref);
  MeasurementMatrices h;
  h.H_a.setZero();
  h.H_m.setZero();
  h.H_a.block<3, 3>(0, 0) = -c * skew(gravity_n(model));
  h.H_a.block<3, 3>(0, 3) = Mat3::Identity();
  h.H_m.block<3, 3>(0, 0) = c * skew(mag_field_n(model));
  return h;
}

Eigen::MatrixXd update_cov(const Eigen::MatrixXd& P_minus, const Eigen::MatrixXd& H, const Eigen::MatrixXd& R) {
  const Eigen::MatrixXd S = H * P_minus * H.transpose() + R;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
  if (!lu.isInvertible()) throw SingularInnovation("innovation covariance is singular");
  const Eigen::MatrixXd PHt = P_minus * H.transpose();
  const Eigen::MatrixXd P = P_minus - PHt * lu.solve(PHt.transpose());
  return 0.5 * (P + P.transpose());
}

namespace {

void correct(EkfState& s, const Eigen::Matrix<double, 3, 9>& H, const Vec3& innovation, const Mat3& R) {
  const Mat3 S = H * s.P * H.transpose() + R;
  Eigen::FullPivLU<Mat3> lu(S);
  if (!lu.isInvertible()) throw SingularInnovation("innovation covariance is singular");
  const Eigen::Matrix<double, 9, 3> K = s.P * H.transpose() * lu.inverse();
  const Vec9 dx = K * innovation;
  s.q = normalize(quat_mul(Quaternion(1.0, 0.5 * dx.head<3>()), s.q));
  s.b_a += dx.segment<3>(3);
  s.b_g += dx.tail<3>();
  s.P = symmetrize(s.P - K * H * s.P);
}

}  // namespace

EkfState ekf_update(const EkfState& state, const ImuSample& sample, const NoiseSpec& noise, const EarthModel& model) {
  EkfState s = state;
  if (sample.accel_valid) {
    const MeasurementMatrices h = measurement_matrices(s.q, model);
    correct(s, h.H_a, sample.y_a - predict_accel(s.q, s.b_a, model), noise.R_a);
  }
  if (sample.mag_valid) {
    const MeasurementMatrices h = measurement_matrices(s.q, model);
    correct(s, h.H_m, sample.y_m - predict_mag(s.q, model), noise.R_m);
  }
  return s;
}

EkfState ekf_step(const EkfState& state, const ImuSample& sample, const NoiseSpec& noise, const EarthModel& model,
                  double T, const Vec3* previous_gyro) {
  EkfState s = state;
  const Vec3 rate = (previous_gyro ? 0.5 * (*previous_gyro + sample.y_g) : sample.y_g) - s.b_g;
  s.P = predict_cov(s.P, s.q, process_noise(noise, T), T);
  const Quaternion earth = rotation_vector_to_quat(earth_rate_n(model) * T);
  s.q = normalize(quat_mul(quat_mul(quat_conj(earth), s.q), rotation_vector_to_quat(rate * T)));
  return ekf_update(s, sample, noise, model);
}

std::vector<Mat9> covariance_along_estimate(const ImuWindow& window, const std::vector<Quaternion>& attitude_track,
                                            const Mat9& P0, const NoiseSpec& noise, const EarthModel& model) {
  if (attitude_track.size() != window.samples.size()) throw MismatchedTracks("attitude track length mismatch");
  std::vector<Mat9> out;
  out.reserve(window.samples.size());
  Mat9 P = P0;
  for (std::size_t i = 0; i < window.samples.size(); ++i) {
    const ImuSample& s = window.samples[i];
    if (i > 0) {
      const double T = s.t - window.samples[i - 1].t;
      P = predict_cov(P, attitude_track[i - 1], process_noise(noise, T), T);
    }
    if (i >= window.measurement_start) {
      const MeasurementMatrices h = measurement_matrices(normalize(attitude_track[i]), model);
      if (s.accel_valid) P = update_cov(P, h.H_a, noise.R_a);
      if (s.mag_valid) P = update_cov(P, h.H_m, noise.R_m);
    }
    out.push_back(P);
  }
  return out;
}

EstimateTrack run_ekf(std::span<const ImuSample> samples, const WindowPrior& initial, const EstimatorConfig& config) {
  const auto start_clock = std::chrono::steady_clock::now();
  if (samples.empty()) throw DomainError("no samples");
  EstimateTrack track;
  track.t.reserve(samples.size());
  EkfState s{normalize(initial.q0), initial.b_a0, initial.b_g0, initial.P0};
  ImuSample prev;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    ImuSample cur = samples[i];
    apply_detectors(cur, config.earth, config.detectors);
    if (i == 0) {
      s = ekf_update(s, cur, config.noise, config.earth);
    } else {
      const double T = cur.t - prev.t;
      if (!(T > 0.0)) throw NonMonotoneTime("sample times must increase");
      s = ekf_step(s, cur, config.noise, config.earth, T, &prev.y_g);
    }
    track.t.push_back(cur.t);
    track.q.push_back(canonical(s.q));
    track.b_a.push_back(s.b_a);
    track.b_g.push_back(s.b_g);
    track.p_diag.push_back(s.P.diagonal());
    prev = cur;
  }
  track.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_clock).count();
  return track;
}

}  // namespace attestpo
