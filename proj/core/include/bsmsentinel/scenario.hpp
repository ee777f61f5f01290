#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bsmsentinel/bsm.hpp"
#include "bsmsentinel/labels.hpp"
#include "bsmsentinel/rng.hpp"

namespace bsmsentinel {

/// A vehicle placed at a fixed time instead of drawn from the arrival process.
struct ForcedVehicle {
  double spawn_time = 0.0;
  int lane = 0;
  std::optional<double> entry_speed;
};

/// Straight four-lane arterial: two lanes northbound, two southbound, all
/// starting at the anchor. Vehicles enter at `entry_speed` (defaults to the
/// limit) and accelerate at `acceleration` until they reach the limit.
struct ScenarioConfig {
  double duration = 200.0;      // s
  int lanes = 4;
  double flow = 200.0;          // vehicles/hour/lane
  double speed_limit = 15.65;   // m/s (35 mph)
  double bsm_rate = 10.0;       // messages/s/vehicle
  std::uint64_t seed = 1;
  std::optional<double> entry_speed;
  double acceleration = 2.0;    // m/s^2
  double anchor_lat = 34.68;
  double anchor_lon = -82.85;
  double lane_width = 3.5;      // m
  std::vector<ForcedVehicle> forced;
};

void validate(const ScenarioConfig& config);

struct AttackSpec {
  AttackKind kind = AttackKind::kDos;
  VehicleId target_vehicle = 0;  // flooder, impersonating attacker, or falsifier
  double onset = 0.0;            // s
  double duration = 0.0;         // s; active over [onset, onset + duration)
  double dos_rate = 1000.0;      // messages/s
  VehicleId victim_id = 0;       // impersonation only
  double lat_box = 0.5;          // false info: +/- degrees around the true fix
  double lon_box = 0.8;
};

/// Throws ContractError if the spec breaks its invariants against `config`.
void validate(const AttackSpec& spec, const ScenarioConfig& config);

struct RecordLabel {
  AttackKind kind = AttackKind::kNone;
  int spec_index = -1;  // into LabeledTrace::attacks

  bool is_attack() const noexcept { return kind != AttackKind::kNone; }
  friend bool operator==(const RecordLabel&, const RecordLabel&) = default;
};

struct VehicleInfo {
  VehicleId id = 0;
  int lane = 0;
  double spawn_time = 0.0;
  double entry_speed = 0.0;
};

/// Records with parallel ground-truth labels.
struct LabeledTrace {
  ScenarioConfig scenario;
  std::vector<VehicleInfo> vehicles;
  std::vector<BsmRecord> records;
  std::vector<RecordLabel> labels;
  std::vector<AttackSpec> attacks;

  std::vector<LabelRow> label_rows() const;
};

/// Attack-free trace. Draws: per lane in order, exponential inter-arrival gaps
/// until the duration is exceeded. Ids follow first-report order.
LabeledTrace generate_baseline(const ScenarioConfig& config, Rng& rng);

/// Replaces the target's reports in the window with a flood at spec.dos_rate,
/// frozen at its first in-window position with zero speed.
LabeledTrace inject_dos(LabeledTrace trace, const AttackSpec& spec);

/// Re-stamps the attacker's reports in the window with the victim's id.
LabeledTrace inject_impersonation(LabeledTrace trace, const AttackSpec& spec);

/// Replaces the target's fixes in the window with uniform draws from the
/// perturbation box and its speed with a uniform draw on [0, limit].
/// Draw order per record: latitude, longitude, speed. A zero box only relabels.
LabeledTrace inject_false_info(LabeledTrace trace, const AttackSpec& spec, Rng& rng);

/// Applies any injector by kind.
LabeledTrace inject(LabeledTrace trace, const AttackSpec& spec, Rng& rng);

/// Baseline plus every attack, all driven by one Rng seeded from config.seed.
LabeledTrace simulate(const ScenarioConfig& config, std::span<const AttackSpec> attacks);

}  // namespace bsmsentinel
