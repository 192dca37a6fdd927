#include "attestpo/window.hpp"

#include <algorithm>

#include "attestpo/errors.hpp"

namespace attestpo {

int ImuWindow::accel_count() const {
  int n = 0;
  for (std::size_t i = measurement_start; i < samples.size(); ++i) n += samples[i].accel_valid ? 1 : 0;
  return n;
}

int ImuWindow::mag_count() const {
  int n = 0;
  for (std::size_t i = measurement_start; i < samples.size(); ++i) n += samples[i].mag_valid ? 1 : 0;
  return n;
}

ImuWindow make_window(std::span<const ImuSample> samples, std::size_t measurement_start) {
  if (samples.size() < 2) throw DomainError("a window needs at least two samples");
  ImuWindow w;
  w.samples.assign(samples.begin(), samples.end());
  w.measurement_start = measurement_start;
  return w;
}

WindowContext build_context(const ImuWindow& window, int n_points, int efh_degree, int efh_extension) {
  WindowContext ctx;
  ctx.t0 = window.t0();
  ctx.tM = window.tM();
  if (!(ctx.tM > ctx.t0)) throw DomainError("window has zero length");
  ctx.rate_scale = 2.0 / (ctx.tM - ctx.t0);
  ctx.rule = clenshaw_curtis_weights(n_points);

  const auto m = window.samples.size();
  std::vector<double> times(m);
  Eigen::MatrixXd gyro(3, static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    times[i] = window.samples[i].t;
    gyro.col(static_cast<Eigen::Index>(i)) = window.samples[i].y_g;
  }
  const int degree = std::min<int>(efh_degree, static_cast<int>(m) - 1);
  ctx.gyro_interp = efh_build(times, gyro, degree, efh_extension);

  ctx.gyro_at_points.resize(3, ctx.points());
  for (int i = 0; i < ctx.points(); ++i) {
    const double t = affine_time_unmap(ctx.rule.points(i), ctx.t0, ctx.tM);
    ctx.gyro_at_points.col(i) = efh_eval(ctx.gyro_interp, t);
  }

  for (std::size_t i = window.measurement_start; i < m; ++i) {
    const ImuSample& s = window.samples[i];
    const double tau = affine_time_map(s.t, ctx.t0, ctx.tM);
    if (s.accel_valid) {
      ctx.accel_tau.push_back(tau);
      ctx.accel_y.push_back(s.y_a);
    }
    if (s.mag_valid) {
      ctx.mag_tau.push_back(tau);
      ctx.mag_y.push_back(s.y_m);
    }
  }
  return ctx;
}

}  // namespace attestpo
