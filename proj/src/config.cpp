#include "attestpo/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "attestpo/errors.hpp"

namespace attestpo {

using nlohmann::ordered_json;

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::qua:
      return "qua";
    case Mode::rod:
      return "rod";
    case Mode::ekf:
      return "ekf";
    case Mode::all:
      return "all";
  }
  return "all";
}

Mode parse_mode(const std::string& text) {
  if (text == "qua") return Mode::qua;
  if (text == "rod") return Mode::rod;
  if (text == "ekf") return Mode::ekf;
  if (text == "all") return Mode::all;
  throw DomainError("mode must be one of qua, rod, ekf, all (got \"" + text + "\")");
}

namespace {

/// Reads one JSON object, remembering which keys were consumed.
class Section {
 public:
  Section(const ordered_json& obj, std::string path, std::vector<std::string>& unknown)
      : obj_(obj), path_(std::move(path)), unknown_(unknown) {
    if (!obj_.is_object()) throw ParseError(where("") + " must be an object", 0, path_);
  }
  ~Section() = default;

  void finish() {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key())) unknown_.push_back("unknown key " + where(item.key()));
    }
  }

  void number(const char* key, double& out) {
    if (const ordered_json* v = find(key)) {
      if (!v->is_number()) throw type_error(key, "a number");
      out = v->get<double>();
    }
  }
  void integer(const char* key, int& out) {
    if (const ordered_json* v = find(key)) {
      if (!v->is_number_integer()) throw type_error(key, "an integer");
      out = v->get<int>();
    }
  }
  void unsigned_integer(const char* key, std::uint64_t& out) {
    if (const ordered_json* v = find(key)) {
      if (!v->is_number_unsigned()) throw type_error(key, "a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void boolean(const char* key, bool& out) {
    if (const ordered_json* v = find(key)) {
      if (!v->is_boolean()) throw type_error(key, "a boolean");
      out = v->get<bool>();
    }
  }
  void string(const char* key, std::string& out) {
    if (const ordered_json* v = find(key)) {
      if (!v->is_string()) throw type_error(key, "a string");
      out = v->get<std::string>();
    }
  }
  void vec3(const char* key, Vec3& out) {
    if (const ordered_json* v = find(key)) {
      if (!v->is_array() || v->size() != 3 || !std::all_of(v->begin(), v->end(), [](const auto& e) {
            return e.is_number();
          })) {
        throw type_error(key, "an array of three numbers");
      }
      for (int i = 0; i < 3; ++i) out(i) = (*v)[static_cast<std::size_t>(i)].get<double>();
    }
  }
  const ordered_json* child(const char* key) { return find(key); }
  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const ordered_json* find(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }
  ParseError type_error(const char* key, const char* expected) const {
    return ParseError(where(key) + " must be " + expected, 0, where(key));
  }

  const ordered_json& obj_;
  std::string path_;
  std::vector<std::string>& unknown_;
  std::set<std::string> seen_;
};

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

void validate(const RunConfig& c, std::vector<std::string>& v) {
  if (!(c.window_size > 0.0)) v.push_back("window_size must be positive");
  if (c.cheb_order < 1) v.push_back("cheb_order must be at least 1");
  if (c.quad_points < 1) v.push_back("quad_points must be at least 1");
  if (c.efh_degree < 0) v.push_back("efh_degree must be non-negative");
  if (!(c.eps_a > 0.0)) v.push_back("detectors.eps_a must be positive");
  if (!(c.eps_m > 0.0)) v.push_back("detectors.eps_m must be positive");
  if (!(c.gravity > 0.0)) v.push_back("earth.gravity must be positive");
  if (c.earth_rate < 0.0) v.push_back("earth.earth_rate must be non-negative");
  if (std::abs(c.latitude_deg) > 90.0) v.push_back("earth.latitude_deg must lie in [-90, 90]");
  if (!(c.gyro_arw_deg_sqrt_h > 0.0)) v.push_back("noise.gyro_arw_deg_sqrt_h must be positive");
  if (!(c.accel_std > 0.0)) v.push_back("noise.accel_std must be positive");
  if (!(c.mag_std > 0.0)) v.push_back("noise.mag_std must be positive");
  if (c.gyro_bias_walk < 0.0) v.push_back("noise.gyro_bias_walk must be non-negative");
  if (c.accel_bias_walk < 0.0) v.push_back("noise.accel_bias_walk must be non-negative");
  if (!(c.duration > 0.0)) v.push_back("sim.duration must be positive");
  if (!(c.sample_rate > 0.0)) v.push_back("sim.sample_rate must be positive");
  if (c.duration > 0.0 && c.window_size * c.sample_rate < 1.0 - 1e-9) {
    v.push_back("window_size must span at least one sample period");
  }
  if ((c.attitude_std_deg.array() < 0.0).any()) v.push_back("montecarlo.attitude_std_deg must be non-negative");
  if (!(c.bias_sigma_factor > 0.0)) v.push_back("montecarlo.bias_sigma_factor must be positive");
  if (c.runs < 1) v.push_back("montecarlo.runs must be at least 1");
  if (c.threads < 0) v.push_back("montecarlo.threads must be non-negative");
  if (c.output_dir.empty()) v.push_back("output_dir must not be empty");
}

ordered_json vec_json(const Vec3& v) { return ordered_json::array({v(0), v(1), v(2)}); }

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed JSON at line " + std::to_string(line_of(text, e.byte)) + ": " + e.what(),
                     line_of(text, e.byte));
  }

  RunConfig c;
  std::vector<std::string> violations;
  Section top(root, "", violations);
  std::string mode = to_string(c.mode);
  top.string("mode", mode);
  top.number("window_size", c.window_size);
  top.integer("cheb_order", c.cheb_order);
  c.quad_points = c.cheb_order;
  top.integer("quad_points", c.quad_points);
  top.integer("efh_degree", c.efh_degree);
  top.string("output_dir", c.output_dir);
  top.unsigned_integer("seed", c.seed);

  if (const ordered_json* j = top.child("detectors")) {
    Section s(*j, "detectors", violations);
    s.number("eps_a", c.eps_a);
    s.number("eps_m", c.eps_m);
    s.finish();
  }
  if (const ordered_json* j = top.child("earth")) {
    Section s(*j, "earth", violations);
    s.number("latitude_deg", c.latitude_deg);
    s.number("gravity", c.gravity);
    s.number("earth_rate", c.earth_rate);
    s.number("mag_declination_deg", c.mag_declination_deg);
    s.number("mag_inclination_deg", c.mag_inclination_deg);
    s.finish();
  }
  if (const ordered_json* j = top.child("noise")) {
    Section s(*j, "noise", violations);
    s.number("gyro_arw_deg_sqrt_h", c.gyro_arw_deg_sqrt_h);
    s.number("accel_std", c.accel_std);
    s.number("mag_std", c.mag_std);
    s.number("gyro_bias_walk", c.gyro_bias_walk);
    s.number("accel_bias_walk", c.accel_bias_walk);
    s.finish();
  }
  if (const ordered_json* j = top.child("sim")) {
    Section s(*j, "sim", violations);
    s.number("coning_freq", c.coning_freq);
    s.number("coning_angle_deg", c.coning_angle_deg);
    s.number("duration", c.duration);
    s.number("sample_rate", c.sample_rate);
    s.vec3("gyro_bias_deg_s", c.gyro_bias_deg_s);
    s.vec3("accel_bias", c.accel_bias);
    s.boolean("earth_rate_in_gyro", c.earth_rate_in_gyro);
    s.finish();
  }
  if (const ordered_json* j = top.child("montecarlo")) {
    Section s(*j, "montecarlo", violations);
    s.vec3("attitude_std_deg", c.attitude_std_deg);
    s.number("bias_sigma_factor", c.bias_sigma_factor);
    s.integer("runs", c.runs);
    s.integer("threads", c.threads);
    s.finish();
  }
  if (const ordered_json* j = top.child("input")) {
    Section s(*j, "input", violations);
    s.string("imu", c.imu_path);
    s.string("truth", c.truth_path);
    s.vec3("initial_euler_deg", c.initial_euler_deg);
    s.finish();
  }
  top.finish();

  try {
    c.mode = parse_mode(mode);
  } catch (const DomainError& e) {
    violations.push_back(e.what());
  }
  validate(c, violations);
  if (!violations.empty()) throw ValidationError(violations);
  return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  ordered_json j;
  j["mode"] = to_string(c.mode);
  j["window_size"] = c.window_size;
  j["cheb_order"] = c.cheb_order;
  j["quad_points"] = c.quad_points;
  j["efh_degree"] = c.efh_degree;
  j["detectors"] = {{"eps_a", c.eps_a}, {"eps_m", c.eps_m}};
  j["earth"] = {{"latitude_deg", c.latitude_deg},
                {"gravity", c.gravity},
                {"earth_rate", c.earth_rate},
                {"mag_declination_deg", c.mag_declination_deg},
                {"mag_inclination_deg", c.mag_inclination_deg}};
  j["noise"] = {{"gyro_arw_deg_sqrt_h", c.gyro_arw_deg_sqrt_h},
                {"accel_std", c.accel_std},
                {"mag_std", c.mag_std},
                {"gyro_bias_walk", c.gyro_bias_walk},
                {"accel_bias_walk", c.accel_bias_walk}};
  j["sim"] = {{"coning_freq", c.coning_freq},
              {"coning_angle_deg", c.coning_angle_deg},
              {"duration", c.duration},
              {"sample_rate", c.sample_rate},
              {"gyro_bias_deg_s", vec_json(c.gyro_bias_deg_s)},
              {"accel_bias", vec_json(c.accel_bias)},
              {"earth_rate_in_gyro", c.earth_rate_in_gyro}};
  j["montecarlo"] = {{"attitude_std_deg", vec_json(c.attitude_std_deg)},
                     {"bias_sigma_factor", c.bias_sigma_factor},
                     {"runs", c.runs},
                     {"threads", c.threads}};
  j["input"] = {{"imu", c.imu_path}, {"truth", c.truth_path}, {"initial_euler_deg", vec_json(c.initial_euler_deg)}};
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  return j.dump(2) + "\n";
}

EarthModel earth_model(const RunConfig& c) {
  EarthModel m;
  m.latitude = c.latitude_deg * kDegToRad;
  m.gravity = c.gravity;
  m.earth_rate = c.earth_rate;
  m.mag_declination = c.mag_declination_deg * kDegToRad;
  m.mag_inclination = c.mag_inclination_deg * kDegToRad;
  return m;
}

NoiseSpec noise_spec(const RunConfig& c) {
  NoiseSpec n;
  n.R_g = gyro_psd_to_variance(c.gyro_arw_deg_sqrt_h * kDegToRad / 60.0, c.sample_rate) * Mat3::Identity();
  n.R_a = c.accel_std * c.accel_std * Mat3::Identity();
  n.R_m = c.mag_std * c.mag_std * Mat3::Identity();
  n.Q_bg = c.gyro_bias_walk * c.gyro_bias_walk * Mat3::Identity();
  n.Q_ba = c.accel_bias_walk * c.accel_bias_walk * Mat3::Identity();
  return n;
}

ConingConfig coning_config(const RunConfig& c) {
  ConingConfig s;
  s.coning_freq = c.coning_freq;
  s.coning_angle = c.coning_angle_deg * kDegToRad;
  s.duration = c.duration;
  s.sample_rate = c.sample_rate;
  s.earth = earth_model(c);
  s.noise = noise_spec(c);
  s.detectors = DetectorConfig{c.eps_a, c.eps_m};
  s.gyro_bias = c.gyro_bias_deg_s * kDegToRad;
  s.accel_bias = c.accel_bias;
  s.earth_rate_in_gyro = c.earth_rate_in_gyro;
  s.rng_seed = c.seed;
  return s;
}

EstimatorConfig estimator_config(const RunConfig& c) {
  EstimatorConfig e = estimator_config_for(coning_config(c), c.window_size, c.cheb_order);
  e.quad_points = c.quad_points;
  e.efh_degree = c.efh_degree;
  return e;
}

std::vector<AlgorithmSpec> algorithms(const RunConfig& c) {
  const EstimatorConfig e = estimator_config(c);
  std::vector<AlgorithmSpec> out;
  if (c.mode == Mode::qua || c.mode == Mode::all) out.push_back({"qua", AlgorithmKind::qua, e});
  if (c.mode == Mode::rod || c.mode == Mode::all) out.push_back({"rod", AlgorithmKind::rod, e});
  if (c.mode == Mode::ekf || c.mode == Mode::all) out.push_back({"ekf", AlgorithmKind::ekf, e});
  return out;
}

MonteCarloConfig monte_carlo_config(const RunConfig& c) {
  MonteCarloConfig m;
  m.sim = coning_config(c);
  m.algorithms = algorithms(c);
  m.runs = c.runs;
  m.seed = c.seed;
  m.attitude_std = c.attitude_std_deg * kDegToRad;
  m.bias_sigma_factor = c.bias_sigma_factor;
  m.threads = c.threads;
  return m;
}

}  // namespace attestpo
