#include "bsmsentinel/detection.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "bsmsentinel/errors.hpp"
#include "bsmsentinel/trace_io.hpp"
#include "csv.hpp"

namespace bsmsentinel {

std::string_view to_string(Feature f) noexcept {
  switch (f) {
    case Feature::kMvs: return "MVS";
    case Feature::kMvt: return "MVT";
    case Feature::kDistance: return "DISTANCE";
  }
  return "?";
}

std::string_view to_string(Detector d) noexcept {
  return d == Detector::kCusum ? "CUSUM" : "EM";
}

std::string_view to_string(Decision d) noexcept {
  return d == Decision::kDetection ? "D" : "ND";
}

Feature parse_feature(std::string_view s) {
  for (const Feature f : kAllFeatures) {
    if (to_string(f) == s) return f;
  }
  throw InputError("unknown feature '" + std::string(s) + "'");
}

Detector parse_detector(std::string_view s) {
  for (const Detector d : kAllDetectors) {
    if (to_string(d) == s) return d;
  }
  throw InputError("unknown detector '" + std::string(s) + "'");
}

Decision parse_decision(std::string_view s) {
  if (s == "D") return Decision::kDetection;
  if (s == "ND") return Decision::kNoDetection;
  throw InputError("unknown decision '" + std::string(s) + "'");
}

double feature_value(const FeatureSample& sample, Feature f) noexcept {
  switch (f) {
    case Feature::kMvs: return sample.mvs;
    case Feature::kMvt: return static_cast<double>(sample.mvt);
    case Feature::kDistance: return sample.displacement;
  }
  return 0.0;
}

void write_detections(std::ostream& out, std::span<const Detection> detections) {
  out << kDetectionHeader << '\n';
  fmt::memory_buffer buf;
  for (const auto& d : detections) {
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{}\n", d.vehicle_id,
                   format_decimal(d.window_start), to_string(d.feature), to_string(d.detector),
                   to_string(d.decision), d.score);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

void write_detections_file(const std::filesystem::path& path, std::span<const Detection> detections) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write detections '" + path.string() + "'");
  write_detections(out, detections);
}

std::vector<Detection> read_detections(std::istream& in) {
  std::vector<Detection> out;
  std::string raw;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = csv::trim(raw);
    if (line.empty()) continue;
    if (!header) {
      if (line != kDetectionHeader) throw ParseError(line_no, "expected header '" + std::string(kDetectionHeader) + "'");
      header = true;
      continue;
    }
    const auto f = csv::split(line, ',', true);
    if (f.size() != 6) throw ParseError(line_no, fmt::format("expected 6 fields, found {}", f.size()));
    Detection d;
    d.vehicle_id = csv::parse_int(f[0], line_no, "vehicle_id");
    d.window_start = csv::parse_double(f[1], line_no, "window_start");
    try {
      d.feature = parse_feature(f[2]);
      d.detector = parse_detector(f[3]);
      d.decision = parse_decision(f[4]);
    } catch (const InputError& e) {
      throw ParseError(line_no, e.what());
    }
    d.score = csv::parse_double(f[5], line_no, "score");
    out.push_back(d);
  }
  if (!header) throw ParseError(line_no, "missing header row");
  return out;
}

std::vector<Detection> read_detections_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open detections '" + path.string() + "'");
  return read_detections(in);
}

}  // namespace bsmsentinel
