#include "attestpo/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "attestpo/errors.hpp"

namespace attestpo {

std::string estimate_header() {
  std::string h = kTruthHeader;
  for (int i = 0; i < 9; ++i) h += ",p" + std::to_string(i) + std::to_string(i);
  return h;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

/// Reads a CSV whose header must contain `columns`; returns rows reordered to that order.
std::vector<std::vector<double>> read_table(const std::filesystem::path& path, const std::vector<std::string>& columns) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(path.string() + ": empty file");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const std::vector<std::string> header = split(line);
  std::vector<std::size_t> index;
  for (const std::string& c : columns) {
    std::size_t i = 0;
    while (i < header.size() && header[i] != c) ++i;
    if (i == header.size()) throw SchemaError(path.string() + ": missing column '" + c + "'");
    index.push_back(i);
  }
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size()) {
      throw SchemaError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, got " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(index.size());
    for (std::size_t k = 0; k < index.size(); ++k) {
      const std::string& cell = cells[index[k]];
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        throw SchemaError(path.string() + ":" + std::to_string(line_no) + ": column '" + columns[k] +
                          "' is not a number: '" + cell + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void check_times(const std::filesystem::path& path, const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i][0] > rows[i - 1][0])) {
      throw NonMonotoneTime(path.string() + ": time does not increase at data row " + std::to_string(i + 1));
    }
  }
}

std::vector<std::string> split_header(const char* header) { return split(header); }

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void put(std::ostream& out, double v) { out << ',' << format_double(v); }
void put(std::ostream& out, const Vec3& v) {
  for (int i = 0; i < 3; ++i) put(out, v(i));
}
void put(std::ostream& out, const Quaternion& q) {
  put(out, q.s);
  put(out, q.eta);
}

}  // namespace

IngestResult ingest_imu_csv(const std::filesystem::path& path, const EarthModel& model,
                            const DetectorConfig& detectors) {
  const auto rows = read_table(path, split_header(kImuHeader));
  check_times(path, rows);
  IngestResult r;
  r.samples.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    ImuSample s;
    s.t = row[0];
    s.y_g = Vec3(row[1], row[2], row[3]);
    s.y_a = Vec3(row[4], row[5], row[6]);
    s.y_m = Vec3(row[7], row[8], row[9]);
    if (std::abs(s.y_m.norm() - 1.0) > 0.2) {
      r.warnings.push_back("row " + std::to_string(i + 1) + ": magnetometer norm " + format_double(s.y_m.norm()) +
                           " is far from 1; is the column normalized?");
    }
    apply_detectors(s, model, detectors);
    r.samples.push_back(s);
  }
  return r;
}

std::vector<TruthSample> ingest_truth_csv(const std::filesystem::path& path) {
  const auto rows = read_table(path, split_header(kTruthHeader));
  check_times(path, rows);
  std::vector<TruthSample> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    out.push_back({row[0], Quaternion(row[1], row[2], row[3], row[4]), Vec3(row[5], row[6], row[7]),
                   Vec3(row[8], row[9], row[10])});
  }
  return out;
}

EstimateTrack ingest_estimate_csv(const std::filesystem::path& path) {
  const auto rows = read_table(path, split(estimate_header()));
  check_times(path, rows);
  EstimateTrack track;
  for (const auto& row : rows) {
    track.t.push_back(row[0]);
    track.q.push_back(Quaternion(row[1], row[2], row[3], row[4]));
    track.b_a.push_back(Vec3(row[5], row[6], row[7]));
    track.b_g.push_back(Vec3(row[8], row[9], row[10]));
    Vec9 p;
    for (int i = 0; i < 9; ++i) p(i) = row[11 + static_cast<std::size_t>(i)];
    track.p_diag.push_back(p);
  }
  return track;
}

void write_imu_csv(const std::filesystem::path& path, const std::vector<ImuSample>& samples) {
  std::ofstream out = open_out(path);
  out << kImuHeader << '\n';
  for (const ImuSample& s : samples) {
    out << format_double(s.t);
    put(out, s.y_g);
    put(out, s.y_a);
    put(out, s.y_m);
    out << '\n';
  }
}

void write_truth_csv(const std::filesystem::path& path, const std::vector<TruthSample>& truth) {
  std::ofstream out = open_out(path);
  out << kTruthHeader << '\n';
  for (const TruthSample& s : truth) {
    out << format_double(s.t);
    put(out, s.q);
    put(out, s.b_a);
    put(out, s.b_g);
    out << '\n';
  }
}

void write_estimate_csv(const std::filesystem::path& path, const EstimateTrack& track) {
  std::ofstream out = open_out(path);
  out << estimate_header() << '\n';
  for (std::size_t k = 0; k < track.size(); ++k) {
    out << format_double(track.t[k]);
    put(out, track.q[k]);
    put(out, track.b_a[k]);
    put(out, track.b_g[k]);
    for (int i = 0; i < 9; ++i) put(out, track.p_diag[k](i));
    out << '\n';
  }
}

}  // namespace attestpo
