#include "attestpo/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Cholesky>

#include "attestpo/errors.hpp"

namespace attestpo {
namespace {

void check_time(const ConingConfig& cfg, double t) {
  if (t < -1e-12 || t > cfg.duration + 1e-9) throw DomainError("time outside the simulated span");
}

class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  Vec3 draw(const Mat3& cov) {
    const Vec3 z(normal_(engine_), normal_(engine_), normal_(engine_));
    if (cov.isZero(0.0)) return Vec3::Zero();
    return Eigen::LLT<Mat3>(cov).matrixL() * z;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace

std::size_t ConingConfig::sample_count() const {
  return static_cast<std::size_t>(std::llround(duration * sample_rate)) + 1;
}

double gyro_psd_to_variance(double root_psd, double sample_rate) {
  return root_psd * root_psd * sample_rate;
}

EarthModel default_earth_model() {
  EarthModel m;
  m.latitude = 28.0 * kDegToRad;
  m.mag_declination = -5.0 * kDegToRad;
  m.mag_inclination = 45.0 * kDegToRad;
  return m;
}

NoiseSpec default_noise_spec(double sample_rate) {
  NoiseSpec n;
  const double arw = kDegToRad / 60.0;  // 1 deg/√h in rad/s/√Hz
  n.R_g = gyro_psd_to_variance(arw, sample_rate) * Mat3::Identity();
  n.R_a = 0.01 * 0.01 * Mat3::Identity();
  n.R_m = 0.02 * 0.02 * Mat3::Identity();
  n.Q_bg = Mat3::Zero();
  n.Q_ba = Mat3::Zero();
  return n;
}

ConingConfig default_coning_config() {
  ConingConfig c;
  c.earth = default_earth_model();
  c.noise = default_noise_spec(c.sample_rate);
  return c;
}

Quaternion coning_quat(const ConingConfig& cfg, double t) {
  check_time(cfg, t);
  const double half = 0.5 * cfg.coning_angle;
  const double zt = cfg.coning_freq * t;
  return {std::cos(half), std::sin(half) * Vec3(0.0, std::cos(zt), std::sin(zt))};
}

Vec4 coning_quat_rate(const ConingConfig& cfg, double t) {
  check_time(cfg, t);
  const double sh = std::sin(0.5 * cfg.coning_angle);
  const double zt = cfg.coning_freq * t;
  return {0.0, 0.0, -sh * cfg.coning_freq * std::sin(zt), sh * cfg.coning_freq * std::cos(zt)};
}

Vec3 coning_omega(const ConingConfig& cfg, double t) {
  const Quaternion q = coning_quat(cfg, t);
  const Quaternion rate = quat_mul(quat_conj(q), Quaternion(coning_quat_rate(cfg, t)));
  Vec3 w = 2.0 * rate.eta;
  if (cfg.earth_rate_in_gyro) w += rotate_vector(q, earth_rate_n(cfg.earth));
  return w;
}

SimulatedData synthesize(const ConingConfig& cfg) {
  if (!(cfg.sample_rate > 0.0) || !(cfg.duration > 0.0)) {
    throw DomainError("sample_rate and duration must be positive");
  }
  SimulatedData out;
  out.seed = cfg.rng_seed;
  GaussianSource gyro_noise(cfg.rng_seed);
  GaussianSource accel_noise(cfg.rng_seed ^ 0x9e3779b97f4a7c15ULL);
  GaussianSource mag_noise(cfg.rng_seed ^ 0xbf58476d1ce4e5b9ULL);
  GaussianSource walk_noise(cfg.rng_seed ^ 0x94d049bb133111ebULL);

  const std::size_t n = cfg.sample_count();
  const double dt = cfg.sample_period();
  out.samples.reserve(n);
  out.truth.reserve(n);
  Vec3 b_g = cfg.gyro_bias;
  Vec3 b_a = cfg.accel_bias;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = std::min(k * dt, cfg.duration);
    if (k > 0) {
      b_g += walk_noise.draw(cfg.noise.Q_bg * dt);
      b_a += walk_noise.draw(cfg.noise.Q_ba * dt);
    }
    const Quaternion q = coning_quat(cfg, t);
    ImuSample s;
    s.t = t;
    s.y_g = coning_omega(cfg, t) + b_g + gyro_noise.draw(cfg.noise.R_g);
    s.y_a = predict_accel(q, b_a, cfg.earth) + accel_noise.draw(cfg.noise.R_a);
    s.y_m = predict_mag(q, cfg.earth) + mag_noise.draw(cfg.noise.R_m);
    apply_detectors(s, cfg.earth, cfg.detectors);
    out.samples.push_back(s);
    out.truth.push_back({t, q, b_a, b_g});
  }
  return out;
}

}  // namespace attestpo
