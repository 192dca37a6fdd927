#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "attestpo/estimator.hpp"
#include "attestpo/sim.hpp"

namespace attestpo {

inline constexpr const char* kImuHeader = "t,gx,gy,gz,ax,ay,az,mx,my,mz";
inline constexpr const char* kTruthHeader = "t,qw,qx,qy,qz,bax,bay,baz,bgx,bgy,bgz";

std::string estimate_header();

struct IngestResult {
  std::vector<ImuSample> samples;
  std::vector<std::string> warnings;
};

/// Reads an IMU log. Throws SchemaError (naming the missing column or bad row) and
/// NonMonotoneTime. Detectors are applied with `model`/`detectors`.
IngestResult ingest_imu_csv(const std::filesystem::path& path, const EarthModel& model,
                            const DetectorConfig& detectors);
std::vector<TruthSample> ingest_truth_csv(const std::filesystem::path& path);
/// Estimate files carry the truth columns plus the covariance diagonal; biases and
/// attitude are read back, the diagonal into p_diag.
EstimateTrack ingest_estimate_csv(const std::filesystem::path& path);

void write_imu_csv(const std::filesystem::path& path, const std::vector<ImuSample>& samples);
void write_truth_csv(const std::filesystem::path& path, const std::vector<TruthSample>& truth);
void write_estimate_csv(const std::filesystem::path& path, const EstimateTrack& track);

/// 17 significant digits; parses back to exactly `value`.
std::string format_double(double value);

}  // namespace attestpo
