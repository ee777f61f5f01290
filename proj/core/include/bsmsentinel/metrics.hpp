#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bsmsentinel/detection.hpp"
#include "bsmsentinel/labels.hpp"

namespace bsmsentinel {

/// Per-window confusion counts and derived rates for one
/// (attack kind, detector, feature) group.
struct GroupMetrics {
  AttackKind kind = AttackKind::kNone;
  Detector detector = Detector::kCusum;
  Feature feature = Feature::kMvs;

  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 1.0;
  double false_positive_rate = 0.0;
  double false_negative_rate = 0.0;

  std::size_t episodes = 0;           // attacked (kind, vehicle) streams
  std::size_t episodes_detected = 0;
  // Worst first-detection delay over detected episodes.
  std::optional<std::int64_t> latency_windows;
  std::optional<double> latency_seconds;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
};

struct MetricsReport {
  double window_len = 0.0;
  std::vector<GroupMetrics> groups;
  // Timing; excluded from determinism comparisons.
  std::optional<double> throughput;       // observations/s
  std::optional<double> elapsed_seconds;

  const GroupMetrics* find(AttackKind kind, Detector detector, Feature feature) const noexcept;
};

/// Scores window-level decisions against record-level ground truth.
///
/// A (vehicle, window) is positive for kind K when any record of that kind
/// falls inside it; windows attacked only by other kinds are left out of K's
/// group. With no attacks at all a single NONE group per detector/feature is
/// reported. Throws ContractError when the detection windows and the labelled
/// windows do not describe the same trace.
MetricsReport score(std::span<const Detection> detections, std::span<const LabelRow> labels,
                    double matching_window);

void write_metrics_table(std::ostream& out, const MetricsReport& report);

/// Machine-readable report. Timing lives under a separate "timing" key that
/// is omitted when `include_timing` is false.
std::string metrics_json(const MetricsReport& report, bool include_timing = true);

}  // namespace bsmsentinel
