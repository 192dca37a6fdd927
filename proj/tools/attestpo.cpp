// attestpo: simulate coning data, run the estimators, and evaluate them.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "attestpo/config.hpp"
#include "attestpo/csv_io.hpp"
#include "attestpo/errors.hpp"
#include "attestpo/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace attestpo;

namespace {

struct Overrides {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<std::string> mode;
  std::optional<double> window;
  std::optional<int> order;
  std::string imu;
  std::string truth;
  std::string estimate;
};

RunConfig load(const Overrides& o) {
  RunConfig c = o.config_path.empty() ? parse_config_text("{}") : parse_config(o.config_path);
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.seed) c.seed = *o.seed;
  if (o.runs) c.runs = *o.runs;
  if (o.mode) c.mode = parse_mode(*o.mode);
  if (o.window) c.window_size = *o.window;
  if (o.order) {
    // a new order re-ties the quadrature unless the config pinned it separately
    if (c.quad_points == c.cheb_order) c.quad_points = *o.order;
    c.cheb_order = *o.order;
  }
  if (!o.imu.empty()) c.imu_path = o.imu;
  if (!o.truth.empty()) c.truth_path = o.truth;
  // re-validate after the overrides
  return parse_config_text(serialize_config(c));
}

ordered_json vec_json(const Vec3& v) { return ordered_json::array({v(0), v(1), v(2)}); }

void write_json(const fs::path& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

ordered_json config_echo(const RunConfig& c) { return ordered_json::parse(serialize_config(c)); }

Vec3 rad_to_deg(const Vec3& v) { return v / kDegToRad; }

int cmd_simulate(const RunConfig& c) {
  fs::create_directories(c.output_dir);
  const SimulatedData data = synthesize(coning_config(c));
  const fs::path dir(c.output_dir);
  write_imu_csv(dir / "imu.csv", data.samples);
  write_truth_csv(dir / "truth.csv", data.truth);
  ordered_json s;
  s["command"] = "simulate";
  s["config"] = config_echo(c);
  s["seed"] = data.seed;
  s["rows"] = data.samples.size();
  write_json(dir / "summary.json", s);
  std::cout << "wrote " << data.samples.size() << " samples to " << dir.string() << '\n';
  return 0;
}

ordered_json metrics_json(const RunErrors& e) {
  double mean_att = 0.0;
  for (const Vec3& v : e.attitude) mean_att += v.norm();
  mean_att /= static_cast<double>(e.attitude.size());
  std::vector<double> att, sig;
  for (std::size_t k = 0; k < e.t.size(); ++k) {
    att.push_back(e.attitude[k].norm());
    sig.push_back(e.sigma[k](0));
  }
  ordered_json j;
  j["final_euler_error_deg"] = vec_json(rad_to_deg(e.euler.back().cwiseAbs()));
  j["final_attitude_error_deg"] = e.attitude.back().norm() / kDegToRad;
  j["mean_attitude_error_deg"] = mean_att / kDegToRad;
  j["attitude_consistency"] = consistency_fraction(att, sig);
  return j;
}

int cmd_estimate(const RunConfig& c) {
  if (c.imu_path.empty()) throw Error("estimate needs an IMU file (--imu or input.imu)");
  const EarthModel model = earth_model(c);
  const IngestResult in = ingest_imu_csv(c.imu_path, model, DetectorConfig{c.eps_a, c.eps_m});
  for (const std::string& w : in.warnings) std::cerr << "warning: " << w << '\n';
  std::vector<TruthSample> truth;
  if (!c.truth_path.empty()) truth = ingest_truth_csv(c.truth_path);

  WindowPrior prior;
  if (!truth.empty()) {
    prior.q0 = truth.front().q;
  } else {
    const Vec3 e = c.initial_euler_deg * kDegToRad;
    prior.q0 = euler_to_quat({e(0), e(1), e(2)});
  }
  prior.P0 = Mat9::Zero();
  const Vec3 att_std = (c.attitude_std_deg * kDegToRad).cwiseMax(1e-6);
  prior.P0.block<3, 3>(0, 0) = att_std.cwiseAbs2().asDiagonal();
  const Vec3 bg_std = (c.bias_sigma_factor * c.gyro_bias_deg_s.cwiseAbs() * kDegToRad).cwiseMax(1e-4);
  const Vec3 ba_std = (c.bias_sigma_factor * c.accel_bias.cwiseAbs()).cwiseMax(1e-4);
  prior.P0.block<3, 3>(3, 3) = ba_std.cwiseAbs2().asDiagonal();
  prior.P0.block<3, 3>(6, 6) = bg_std.cwiseAbs2().asDiagonal();

  fs::create_directories(c.output_dir);
  const fs::path dir(c.output_dir);
  const auto algs = algorithms(c);
  ordered_json s;
  s["command"] = "estimate";
  s["config"] = config_echo(c);
  s["samples"] = in.samples.size();
  s["warnings"] = in.warnings;
  bool all_ok = true;
  for (const AlgorithmSpec& a : algs) {
    ordered_json r;
    const std::string file = algs.size() == 1 ? "estimate.csv" : "estimate_" + a.name + ".csv";
    try {
      const EstimateTrack track = run_algorithm(a, in.samples, prior);
      write_estimate_csv(dir / file, track);
      r["file"] = file;
      r["converged"] = track.converged();
      r["nonconverged_windows"] = track.nonconverged_windows;
      r["windows"] = track.windows.size();
      r["wall_seconds"] = track.wall_seconds;
      if (!truth.empty()) r["metrics"] = metrics_json(track_errors(track, truth));
      all_ok = all_ok && track.converged();
    } catch (const std::exception& e) {
      r["converged"] = false;
      r["error"] = e.what();
      all_ok = false;
    }
    s["algorithms"][a.name] = r;
    std::cout << a.name << ": " << r.dump() << '\n';
  }
  s["all_converged"] = all_ok;
  write_json(dir / "summary.json", s);
  return all_ok ? 0 : 1;
}

int cmd_montecarlo(const RunConfig& c) {
  const MonteCarloConfig mc = monte_carlo_config(c);
  const RunMetrics m = monte_carlo(mc);
  fs::create_directories(c.output_dir);
  const fs::path dir(c.output_dir);

  std::ofstream csv(dir / "metrics.csv");
  if (!csv) throw Error("cannot write metrics.csv");
  csv << 't';
  for (const AlgorithmMetrics& a : m.algorithms) {
    for (const char* g : {"att", "ba", "bg"}) csv << ',' << a.name << '_' << g << "_err," << a.name << '_' << g << "_2sigma";
  }
  csv << '\n';
  const std::vector<double>* t = nullptr;
  for (const AlgorithmMetrics& a : m.algorithms) {
    if (!a.error.t.empty()) t = &a.error.t;
  }
  if (t) {
    for (std::size_t k = 0; k < t->size(); ++k) {
      csv << format_double((*t)[k]);
      for (const AlgorithmMetrics& a : m.algorithms) {
        const bool has = !a.error.t.empty();
        const auto cell = [&](const std::vector<double>& v, double scale) {
          csv << ',' << (has ? format_double(scale * v[k]) : std::string("nan"));
        };
        cell(a.error.attitude, 1.0);
        cell(a.sigma.attitude, 2.0);
        cell(a.error.accel_bias, 1.0);
        cell(a.sigma.accel_bias, 2.0);
        cell(a.error.gyro_bias, 1.0);
        cell(a.sigma.gyro_bias, 2.0);
      }
      csv << '\n';
    }
  }

  ordered_json s;
  s["command"] = "montecarlo";
  s["config"] = config_echo(c);
  s["runs"] = m.runs;
  s["threads"] = m.threads;
  s["seeds"] = m.seeds;
  for (const AlgorithmMetrics& a : m.algorithms) {
    ordered_json r;
    r["final_euler_rmse_deg"] = vec_json(rad_to_deg(a.final_rmse));
    r["attitude_consistency"] = a.attitude_consistency;
    r["accel_bias_consistency"] = a.accel_bias_consistency;
    r["gyro_bias_consistency"] = a.gyro_bias_consistency;
    r["mean_wall_seconds"] = a.mean_wall_seconds;
    r["failed_runs"] = a.failed_runs;
    r["nonconverged_runs"] = a.nonconverged_runs;
    r["failures"] = a.failures;
    s["algorithms"][a.name] = r;
    std::cout << a.name << ": " << r.dump() << '\n';
  }
  s["all_converged"] = m.all_converged();
  write_json(dir / "summary.json", s);
  return m.all_converged() ? 0 : 1;
}

int cmd_metrics(const RunConfig& c, const Overrides& o) {
  if (o.estimate.empty() || c.truth_path.empty()) throw Error("metrics needs --estimate and --truth");
  const EstimateTrack est = ingest_estimate_csv(o.estimate);
  const std::vector<TruthSample> truth = ingest_truth_csv(c.truth_path);
  const RunErrors e = track_errors(est, truth);
  fs::create_directories(c.output_dir);
  const fs::path dir(c.output_dir);
  std::ofstream csv(dir / "metrics.csv");
  if (!csv) throw Error("cannot write metrics.csv");
  csv << "t,att_err,ba_err,bg_err,roll_err,yaw_err,pitch_err,alpha_ref,alpha_est,alpha_err\n";
  for (std::size_t k = 0; k < e.t.size(); ++k) {
    const double a_ref = relative_rotation_angle(truth[k].q, truth.front().q);
    const double a_est = relative_rotation_angle(est.q[k], est.q.front());
    csv << format_double(e.t[k]) << ',' << format_double(e.attitude[k].norm()) << ','
        << format_double(e.accel_bias[k].norm()) << ',' << format_double(e.gyro_bias[k].norm());
    for (int i = 0; i < 3; ++i) csv << ',' << format_double(e.euler[k](i));
    csv << ',' << format_double(a_ref) << ',' << format_double(a_est) << ','
        << format_double(rotation_angle_error(a_ref, a_est)) << '\n';
  }
  ordered_json s;
  s["command"] = "metrics";
  s["estimate"] = o.estimate;
  s["truth"] = c.truth_path;
  s["metrics"] = metrics_json(e);
  write_json(dir / "summary.json", s);
  std::cout << s["metrics"].dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sliding-window attitude estimation by Chebyshev polynomial optimization"};
  app.require_subcommand(1);
  Overrides o;
  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--mode", o.mode, "qua | rod | ekf | all");
    sub->add_option("--window", o.window, "Window length in seconds");
    sub->add_option("--order", o.order, "Chebyshev order");
  };
  CLI::App* sim = app.add_subcommand("simulate", "Write imu.csv and truth.csv for the coning scenario");
  common(sim);
  CLI::App* est = app.add_subcommand("estimate", "Run estimators on an IMU log");
  common(est);
  est->add_option("--imu", o.imu, "IMU CSV")->check(CLI::ExistingFile);
  est->add_option("--truth", o.truth, "Truth CSV (optional; enables metrics and the exact prior)")
      ->check(CLI::ExistingFile);
  CLI::App* mc = app.add_subcommand("montecarlo", "Monte-Carlo study on simulated coning data");
  common(mc);
  mc->add_option("--runs", o.runs, "Replications");
  CLI::App* met = app.add_subcommand("metrics", "Error tables for an estimate against truth");
  common(met);
  met->add_option("--estimate", o.estimate, "Estimate CSV")->required()->check(CLI::ExistingFile);
  met->add_option("--truth", o.truth, "Truth CSV")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  try {
    const RunConfig c = load(o);
    if (sim->parsed()) return cmd_simulate(c);
    if (est->parsed()) return cmd_estimate(c);
    if (mc->parsed()) return cmd_montecarlo(c);
    return cmd_metrics(c, o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
