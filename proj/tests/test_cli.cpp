#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "attestpo/config.hpp"
#include "attestpo/csv_io.hpp"
#include "attestpo/errors.hpp"
#include "scenario.hpp"
#include "support.hpp"

using namespace attestpo;
using namespace attestpo::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("attestpo_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ATTESTPO_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, MinimalUsesDefaults) {
  const RunConfig c = parse_config_text(R"({"mode": "qua"})");
  EXPECT_EQ(c.mode, Mode::qua);
  EXPECT_DOUBLE_EQ(c.window_size, 0.1);
  EXPECT_EQ(c.cheb_order, 6);
  EXPECT_EQ(c.quad_points, 6);
  EXPECT_EQ(c.efh_degree, 3);
  EXPECT_EQ(c.runs, 20);
}

TEST(Config, QuadPointsFollowOrderUnlessGiven) {
  EXPECT_EQ(parse_config_text(R"({"cheb_order": 40})").quad_points, 40);
  EXPECT_EQ(parse_config_text(R"({"cheb_order": 40, "quad_points": 50})").quad_points, 50);
}

TEST(Config, RoundTripIsIdentity) {
  RunConfig c = parse_config_text(R"({"mode": "rod", "window_size": 0.3, "sim": {"duration": 7.5}})");
  c.attitude_std_deg = Vec3(1.0 / 3.0, 2.0, 0.1);
  c.seed = 123456789012345ULL;
  const std::string text = serialize_config(c);
  EXPECT_EQ(serialize_config(parse_config_text(text)), text);
  const RunConfig back = parse_config_text(text);
  EXPECT_EQ(back.attitude_std_deg, c.attitude_std_deg);
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_DOUBLE_EQ(back.duration, 7.5);
}

TEST(Config, ValidationCollectsEveryViolation) {
  try {
    parse_config_text(R"({"window_size": -1, "cheb_order": 0, "noise": {"accel_std": -2}})");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_GE(e.violations().size(), 3u);
    EXPECT_NE(std::string(e.what()).find("window_size"), std::string::npos);
  }
}

TEST(Config, RejectsUnknownKeysAndBadMode) {
  EXPECT_THROW(parse_config_text(R"({"window": 0.1})"), ValidationError);
  EXPECT_THROW(parse_config_text(R"({"earth": {"lat": 1}})"), ValidationError);
  EXPECT_THROW(parse_config_text(R"({"mode": "fast"})"), ValidationError);
}

TEST(Config, SyntaxErrorReportsLine) {
  try {
    parse_config_text("{\n  \"mode\": \"qua\",\n  \"window_size\": ,\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Config, TypeErrorNamesKey) {
  try {
    parse_config_text(R"({"sim": {"duration": "long"}})");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(e.key().find("duration"), std::string::npos);
  }
}

TEST(Config, ConvertsUnits) {
  const RunConfig c = parse_config_text(R"({"mode": "all", "sim": {"coning_angle_deg": 90}})");
  const ConingConfig sim = coning_config(c);
  EXPECT_NEAR(sim.coning_angle, std::numbers::pi / 2, 1e-15);
  EXPECT_EQ(algorithms(c).size(), 3u);
  EXPECT_EQ(algorithms(parse_config_text(R"({"mode": "ekf"})")).size(), 1u);
  EXPECT_NEAR(noise_spec(c).R_g(0, 0), std::pow(kDegToRad / 60.0, 2) * 100.0, 1e-20);
}

TEST(Csv, BitExactRoundTrip) {
  const fs::path dir = scratch("csv_roundtrip");
  const SimulatedData d = synthesize(default_coning_config());
  write_imu_csv(dir / "imu.csv", d.samples);
  write_truth_csv(dir / "truth.csv", d.truth);
  const IngestResult imu = ingest_imu_csv(dir / "imu.csv", default_earth_model(), DetectorConfig{});
  const std::vector<TruthSample> truth = ingest_truth_csv(dir / "truth.csv");
  ASSERT_EQ(imu.samples.size(), d.samples.size());
  ASSERT_EQ(truth.size(), d.truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    EXPECT_EQ(imu.samples[i].t, d.samples[i].t);
    EXPECT_EQ(imu.samples[i].y_g, d.samples[i].y_g);
    EXPECT_EQ(imu.samples[i].y_a, d.samples[i].y_a);
    EXPECT_EQ(imu.samples[i].y_m, d.samples[i].y_m);
    EXPECT_EQ(imu.samples[i].accel_valid, d.samples[i].accel_valid);
    EXPECT_EQ(truth[i].q.coeffs(), d.truth[i].q.coeffs());
    EXPECT_EQ(truth[i].b_g, d.truth[i].b_g);
  }
}

TEST(Csv, EstimateRoundTrip) {
  const fs::path dir = scratch("csv_estimate");
  EstimateTrack t;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 5; ++i) {
    t.t.push_back(0.1 * i);
    t.q.push_back(random_unit_quat(rng));
    t.b_a.push_back(random_vec(rng));
    t.b_g.push_back(random_vec(rng));
    t.p_diag.push_back(Vec9::Constant(1.0 / (i + 3)));
  }
  write_estimate_csv(dir / "e.csv", t);
  const EstimateTrack back = ingest_estimate_csv(dir / "e.csv");
  ASSERT_EQ(back.size(), 5u);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(back.q[i].coeffs(), t.q[i].coeffs());
    EXPECT_EQ(back.p_diag[i], t.p_diag[i]);
  }
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(Csv, MissingColumnIsNamed) {
  const fs::path dir = scratch("csv_missing");
  write_text(dir / "imu.csv", "t,gx,gy,gz,ax,ay,az,mx,my\n0,0,0,0,0,0,9.8,1,0\n");
  try {
    ingest_imu_csv(dir / "imu.csv", default_earth_model(), DetectorConfig{});
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("mz"), std::string::npos);
  }
}

TEST(Csv, RejectsBadRows) {
  const fs::path dir = scratch("csv_bad");
  write_text(dir / "a.csv", std::string(kImuHeader) + "\n0,0,0,0,0,0,9.8,1,0\n");
  EXPECT_THROW(ingest_imu_csv(dir / "a.csv", default_earth_model(), DetectorConfig{}), SchemaError);
  write_text(dir / "b.csv", std::string(kImuHeader) + "\n0,0,0,x,0,0,9.8,1,0,0\n");
  EXPECT_THROW(ingest_imu_csv(dir / "b.csv", default_earth_model(), DetectorConfig{}), SchemaError);
  write_text(dir / "c.csv",
             std::string(kImuHeader) + "\n0,0,0,0,0,0,9.8,1,0,0\n0.01,0,0,0,0,0,9.8,1,0,0\n0.01,0,0,0,0,0,9.8,1,0,0\n");
  EXPECT_THROW(ingest_imu_csv(dir / "c.csv", default_earth_model(), DetectorConfig{}), NonMonotoneTime);
}

TEST(Csv, ColumnOrderIsFree) {
  const fs::path dir = scratch("csv_order");
  write_text(dir / "imu.csv", "mz,my,mx,az,ay,ax,gz,gy,gx,t\n0,0,1,9.8,0,0,0.3,0.2,0.1,0\n");
  const IngestResult r = ingest_imu_csv(dir / "imu.csv", default_earth_model(), DetectorConfig{});
  ASSERT_EQ(r.samples.size(), 1u);
  EXPECT_EQ(r.samples[0].y_g, Vec3(0.1, 0.2, 0.3));
}

TEST(Csv, WarnsOnOddMagnetometerScale) {
  const fs::path dir = scratch("csv_warn");
  write_text(dir / "imu.csv", std::string(kImuHeader) + "\n0,0,0,0,0,0,9.8,50,0,0\n");
  const IngestResult r = ingest_imu_csv(dir / "imu.csv", default_earth_model(), DetectorConfig{});
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_FALSE(r.samples[0].mag_valid);
}

TEST(Cli, SimulateEstimateMetrics) {
  const fs::path dir = scratch("cli");
  write_text(dir / "cfg.json", R"({"sim": {"duration": 1.0}, "output_dir": ")" + dir.string() + R"("})");
  ASSERT_EQ(run_cli("simulate --config " + (dir / "cfg.json").string()), 0);
  EXPECT_EQ(line_count(dir / "imu.csv"), 102u);
  EXPECT_EQ(line_count(dir / "truth.csv"), 102u);

  const std::string est_args = "estimate --config " + (dir / "cfg.json").string() + " --imu " + (dir / "imu.csv").string() +
                               " --truth " + (dir / "truth.csv").string();
  ASSERT_EQ(run_cli(est_args), 0);
  for (const char* name : {"qua", "rod", "ekf"}) {
    EXPECT_EQ(line_count(dir / ("estimate_" + std::string(name) + ".csv")), 102u) << name;
  }
  const auto summary = nlohmann::json::parse(read_text(dir / "summary.json"));
  EXPECT_TRUE(summary["all_converged"].get<bool>());
  EXPECT_LT(summary["algorithms"]["qua"]["metrics"]["final_attitude_error_deg"].get<double>(), 1.0);

  ASSERT_EQ(run_cli(est_args + " --mode rod --out " + (dir / "rod").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "rod" / "estimate.csv"));

  // truth against itself: every error column is zero
  write_estimate_csv(dir / "self.csv", [&] {
    EstimateTrack t;
    for (const TruthSample& s : ingest_truth_csv(dir / "truth.csv")) {
      t.t.push_back(s.t);
      t.q.push_back(s.q);
      t.b_a.push_back(s.b_a);
      t.b_g.push_back(s.b_g);
      t.p_diag.push_back(Vec9::Ones());
    }
    return t;
  }());
  ASSERT_EQ(run_cli("metrics --estimate " + (dir / "self.csv").string() + " --truth " + (dir / "truth.csv").string() +
                    " --out " + (dir / "m").string()),
            0);
  std::ifstream in(dir / "m" / "metrics.csv");
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    for (int col = 0; col < 3; ++col) {
      std::getline(ss, cell, ',');
      EXPECT_EQ(std::stod(cell), 0.0);
    }
  }
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli_codes");
  write_text(dir / "bad.json", R"({"window_size": -1})");
  EXPECT_EQ(run_cli("simulate --config " + (dir / "bad.json").string()), 2);
  write_text(dir / "broken.json", "{");
  EXPECT_EQ(run_cli("simulate --config " + (dir / "broken.json").string()), 2);
  EXPECT_NE(run_cli("estimate --out " + dir.string()), 0);
  EXPECT_NE(run_cli("nonsense"), 0);
}

TEST(Cli, MonteCarloWritesTables) {
  const fs::path dir = scratch("cli_mc");
  write_text(dir / "cfg.json", R"({"sim": {"duration": 0.3}, "montecarlo": {"runs": 2}})");
  ASSERT_EQ(run_cli("montecarlo --config " + (dir / "cfg.json").string() + " --out " + dir.string()), 0);
  EXPECT_EQ(line_count(dir / "metrics.csv"), 32u);
  const auto summary = nlohmann::json::parse(read_text(dir / "summary.json"));
  EXPECT_EQ(summary["seeds"].size(), 2u);
  EXPECT_EQ(summary["runs"].get<int>(), 2);
}
