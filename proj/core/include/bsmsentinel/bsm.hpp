#pragma once

#include <cstdint>
#include <optional>

namespace bsmsentinel {

using VehicleId = std::int64_t;

/// One timestamped basic safety message from one vehicle.
struct BsmRecord {
  double timestamp = 0.0;  // seconds
  VehicleId vehicle_id = 0;
  double latitude = 0.0;   // degrees
  double longitude = 0.0;  // degrees
  double speed = 0.0;      // m/s
  std::optional<double> msg_rate;  // messages/s as reported by the trace

  friend bool operator==(const BsmRecord&, const BsmRecord&) = default;
};

/// Per-vehicle aggregate over one half-open window [start, start + len).
struct FeatureSample {
  VehicleId vehicle_id = 0;
  std::int64_t window_index = 0;
  double window_start = 0.0;
  double window_len = 0.0;
  double mvs = 0.0;           // messages per second
  std::int64_t mvt = 0;       // messages in the window
  double displacement = 0.0;  // meters since the vehicle's previous sample

  friend bool operator==(const FeatureSample&, const FeatureSample&) = default;
};

}  // namespace bsmsentinel
