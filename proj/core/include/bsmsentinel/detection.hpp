#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "bsmsentinel/bsm.hpp"

namespace bsmsentinel {

enum class Feature : std::uint8_t { kMvs, kMvt, kDistance };
enum class Detector : std::uint8_t { kCusum, kEm };
enum class Decision : std::uint8_t { kNoDetection, kDetection };

inline constexpr Feature kAllFeatures[] = {Feature::kMvs, Feature::kMvt, Feature::kDistance};
inline constexpr Detector kAllDetectors[] = {Detector::kCusum, Detector::kEm};

std::string_view to_string(Feature f) noexcept;    // "MVS", "MVT", "DISTANCE"
std::string_view to_string(Detector d) noexcept;   // "CUSUM", "EM"
std::string_view to_string(Decision d) noexcept;   // "D", "ND"
Feature parse_feature(std::string_view s);
Detector parse_detector(std::string_view s);
Decision parse_decision(std::string_view s);

/// Feature value a detector consumes from one window sample.
double feature_value(const FeatureSample& sample, Feature f) noexcept;

/// One detector verdict on one (vehicle, window, feature).
/// `score` is the EM posterior, or max(C+, C-)/h for CUSUM.
struct Detection {
  VehicleId vehicle_id = 0;
  double window_start = 0.0;
  Feature feature = Feature::kMvs;
  Detector detector = Detector::kCusum;
  Decision decision = Decision::kNoDetection;
  double score = 0.0;

  bool detected() const noexcept { return decision == Decision::kDetection; }
  friend bool operator==(const Detection&, const Detection&) = default;
};

inline constexpr const char* kDetectionHeader =
    "vehicle_id,window_start,feature,detector,decision,score";

void write_detections(std::ostream& out, std::span<const Detection> detections);
void write_detections_file(const std::filesystem::path& path,
                           std::span<const Detection> detections);
std::vector<Detection> read_detections(std::istream& in);
std::vector<Detection> read_detections_file(const std::filesystem::path& path);

}  // namespace bsmsentinel
