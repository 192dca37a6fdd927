#include "attestpo/sensors.hpp"

#include <cmath>

namespace attestpo {

Vec3 gravity_n(const EarthModel& model) { return {0.0, -model.gravity, 0.0}; }

Vec3 earth_rate_n(const EarthModel& model) {
  return {model.earth_rate * std::cos(model.latitude), model.earth_rate * std::sin(model.latitude), 0.0};
}

Vec3 mag_field_n(const EarthModel& model) {
  const double ci = std::cos(model.mag_inclination);
  return {std::cos(model.mag_declination) * ci, -std::sin(model.mag_inclination),
          std::sin(model.mag_declination) * ci};
}

bool accel_detector(const Vec3& y_a, const EarthModel& model, const DetectorConfig& cfg) {
  return std::abs(y_a.norm() - model.gravity) < cfg.eps_a;
}

bool mag_detector(const Vec3& y_m, const DetectorConfig& cfg) {
  return std::abs(1.0 - y_m.norm()) < cfg.eps_m;
}

void apply_detectors(ImuSample& sample, const EarthModel& model, const DetectorConfig& cfg) {
  sample.accel_valid = accel_detector(sample.y_a, model, cfg);
  sample.mag_valid = mag_detector(sample.y_m, cfg);
}

Vec3 predict_gyro(const Quaternion& q, const Vec4& q_dot, const Vec3& b_g, const EarthModel& model) {
  const Quaternion rate = quat_mul(quat_conj(q), Quaternion(q_dot));
  return 2.0 * rate.eta + rotate_vector(q, earth_rate_n(model)) + b_g;
}

Vec3 predict_accel(const Quaternion& q, const Vec3& b_a, const EarthModel& model) {
  return -rotate_vector(q, gravity_n(model)) + b_a;
}

Vec3 predict_mag(const Quaternion& q, const EarthModel& model) {
  return rotate_vector(q, mag_field_n(model));
}

}  // namespace attestpo
