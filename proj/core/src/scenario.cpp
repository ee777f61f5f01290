#include "bsmsentinel/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <string>
#include <utility>

#include <fmt/format.h>

#include "bsmsentinel/errors.hpp"
#include "bsmsentinel/geo.hpp"
#include "bsmsentinel/trace_io.hpp"

namespace bsmsentinel {
namespace {

constexpr double kTimeEps = 1e-9;

bool in_window(double t, const AttackSpec& spec) noexcept {
  return t >= spec.onset - kTimeEps && t < spec.onset + spec.duration - kTimeEps;
}

std::vector<std::size_t> records_in_window(const LabeledTrace& trace, VehicleId id, const AttackSpec& spec) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& r = trace.records[i];
    if (r.vehicle_id == id && in_window(r.timestamp, spec)) idx.push_back(i);
  }
  return idx;
}

void require_present(const std::vector<std::size_t>& idx, VehicleId id, const AttackSpec& spec, const char* role) {
  if (idx.empty()) {
    throw InjectionError(fmt::format("{} attack: {} vehicle {} sends nothing in [{}, {})", to_string(spec.kind),
                                     role, id, spec.onset, spec.onset + spec.duration));
  }
}

struct Arrival {
  double spawn_time;
  int lane;
  double entry_speed;
  std::int64_t first_tick;
};

}  // namespace

void validate(const ScenarioConfig& c) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ContractError(fmt::format("scenario {} must be positive", name));
  };
  positive(c.duration, "duration");
  positive(c.flow, "flow");
  positive(c.speed_limit, "speed_limit");
  positive(c.acceleration, "acceleration");
  positive(c.lane_width, "lane_width");
  if (c.lanes < 1) throw ContractError("scenario lanes must be positive");
  if (!(c.bsm_rate >= 1.0) || !std::isfinite(c.bsm_rate)) throw ContractError("scenario bsm_rate must be >= 1");
  if (c.entry_speed && (*c.entry_speed < 0.0 || *c.entry_speed > c.speed_limit)) {
    throw ContractError("scenario entry_speed must lie in [0, speed_limit]");
  }
  if (std::abs(c.anchor_lat) > 89.0 || std::abs(c.anchor_lon) > 179.0) {
    throw ContractError("scenario anchor too close to a pole or the antimeridian");
  }
  for (const auto& f : c.forced) {
    if (f.lane < 0 || f.lane >= c.lanes) throw ContractError("forced vehicle lane out of range");
    if (f.spawn_time < 0.0 || f.spawn_time >= c.duration) throw ContractError("forced vehicle spawns outside the run");
    if (f.entry_speed && (*f.entry_speed < 0.0 || *f.entry_speed > c.speed_limit)) {
      throw ContractError("forced vehicle entry_speed must lie in [0, speed_limit]");
    }
  }
}

void validate(const AttackSpec& spec, const ScenarioConfig& config) {
  if (spec.kind == AttackKind::kNone) throw ContractError("attack kind must not be NONE");
  if (!(spec.onset >= 0.0) || !(spec.duration > 0.0)) {
    throw ContractError("attack needs onset >= 0 and duration > 0");
  }
  if (spec.onset + spec.duration > config.duration + kTimeEps) {
    throw ContractError(fmt::format("attack window ends at {} s, after the {} s scenario",
                                    spec.onset + spec.duration, config.duration));
  }
  switch (spec.kind) {
    case AttackKind::kDos:
      if (!(spec.dos_rate > config.bsm_rate)) {
        throw ContractError(fmt::format("DoS rate {} must exceed the BSM rate {}", spec.dos_rate, config.bsm_rate));
      }
      break;
    case AttackKind::kImpersonation:
      if (spec.victim_id == spec.target_vehicle) throw ContractError("impersonation victim equals attacker");
      break;
    case AttackKind::kFalseInfo:
      if (!(spec.lat_box >= 0.0) || !(spec.lon_box >= 0.0)) throw ContractError("false-info box must be non-negative");
      break;
    case AttackKind::kNone:
      break;
  }
}

std::vector<LabelRow> LabeledTrace::label_rows() const {
  std::vector<LabelRow> rows;
  rows.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    rows.push_back({records[i].timestamp, records[i].vehicle_id, labels[i].kind});
  }
  return rows;
}

LabeledTrace generate_baseline(const ScenarioConfig& config, Rng& rng) {
  validate(config);
  const double v_limit = config.speed_limit;
  const double default_entry = config.entry_speed.value_or(v_limit);
  const double per_second = config.flow / 3600.0;
  const auto last_tick = static_cast<std::int64_t>(std::ceil(config.duration * config.bsm_rate - kTimeEps));

  std::vector<Arrival> arrivals;
  auto admit = [&](double t, int lane, double entry) {
    const auto tick = static_cast<std::int64_t>(std::ceil(t * config.bsm_rate - kTimeEps));
    if (tick < last_tick) arrivals.push_back({t, lane, entry, tick});
  };
  for (const auto& f : config.forced) admit(f.spawn_time, f.lane, f.entry_speed.value_or(default_entry));
  for (int lane = 0; lane < config.lanes; ++lane) {
    double t = 0.0;
    while (true) {
      t += rng.exponential(per_second);
      if (t >= config.duration) break;
      admit(t, lane, default_entry);
    }
  }
  std::stable_sort(arrivals.begin(), arrivals.end(), [](const Arrival& a, const Arrival& b) {
    return std::tie(a.first_tick, a.lane, a.spawn_time) < std::tie(b.first_tick, b.lane, b.spawn_time);
  });

  const int northbound = (config.lanes + 1) / 2;
  const double m_per_deg_lat = geo::meters_per_degree_lat();
  const double m_per_deg_lon = geo::meters_per_degree_lon(config.anchor_lat);

  struct Tagged {
    std::int64_t tick;
    BsmRecord record;
  };
  std::vector<Tagged> tagged;

  LabeledTrace trace;
  trace.scenario = config;
  for (std::size_t n = 0; n < arrivals.size(); ++n) {
    const auto& a = arrivals[n];
    const VehicleId id = static_cast<VehicleId>(n + 1);
    trace.vehicles.push_back({id, a.lane, a.spawn_time, a.entry_speed});

    const bool north = a.lane < northbound;
    const int slot = north ? a.lane : a.lane - northbound;
    const double lateral = (slot + 0.5) * config.lane_width * (north ? 1.0 : -1.0);
    const double lon = config.anchor_lon + lateral / m_per_deg_lon;
    const double heading = north ? 1.0 : -1.0;
    const double t_cruise = (v_limit - a.entry_speed) / config.acceleration;
    const double s_cruise = a.entry_speed * t_cruise + 0.5 * config.acceleration * t_cruise * t_cruise;

    for (std::int64_t tick = a.first_tick; tick < last_tick; ++tick) {
      const double tau = static_cast<double>(tick - a.first_tick) / config.bsm_rate;
      double speed, along;
      if (tau < t_cruise) {
        speed = a.entry_speed + config.acceleration * tau;
        along = a.entry_speed * tau + 0.5 * config.acceleration * tau * tau;
      } else {
        speed = v_limit;
        along = s_cruise + v_limit * (tau - t_cruise);
      }
      BsmRecord r;
      r.timestamp = static_cast<double>(tick) / config.bsm_rate;
      r.vehicle_id = id;
      r.latitude = config.anchor_lat + heading * along / m_per_deg_lat;
      r.longitude = lon;
      r.speed = speed;
      tagged.push_back({tick, quantize(r)});
    }
  }
  std::sort(tagged.begin(), tagged.end(), [](const Tagged& a, const Tagged& b) {
    return std::tie(a.tick, a.record.vehicle_id) < std::tie(b.tick, b.record.vehicle_id);
  });

  trace.records.reserve(tagged.size());
  for (auto& t : tagged) trace.records.push_back(t.record);
  trace.labels.assign(trace.records.size(), RecordLabel{});
  return trace;
}

LabeledTrace inject_dos(LabeledTrace trace, const AttackSpec& spec) {
  validate(spec, trace.scenario);
  if (spec.kind != AttackKind::kDos) throw ContractError("inject_dos needs a DOS spec");
  const auto hit = records_in_window(trace, spec.target_vehicle, spec);
  require_present(hit, spec.target_vehicle, spec, "target");

  BsmRecord frozen = trace.records[hit.front()];
  frozen.speed = 0.0;
  frozen.msg_rate.reset();
  const int spec_index = static_cast<int>(trace.attacks.size());

  std::vector<std::pair<BsmRecord, RecordLabel>> merged;
  merged.reserve(trace.records.size());
  std::size_t next_hit = 0;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    if (next_hit < hit.size() && hit[next_hit] == i) {
      ++next_hit;
      continue;
    }
    merged.emplace_back(trace.records[i], trace.labels[i]);
  }
  const auto flood = static_cast<std::int64_t>(std::llround(spec.duration * spec.dos_rate));
  for (std::int64_t j = 0; j < flood; ++j) {
    BsmRecord r = frozen;
    r.timestamp = spec.onset + static_cast<double>(j) / spec.dos_rate;
    merged.emplace_back(quantize(r), RecordLabel{AttackKind::kDos, spec_index});
  }
  std::stable_sort(merged.begin(), merged.end(),
                   [](const auto& a, const auto& b) { return a.first.timestamp < b.first.timestamp; });

  trace.records.clear();
  trace.labels.clear();
  for (auto& [r, l] : merged) {
    trace.records.push_back(r);
    trace.labels.push_back(l);
  }
  trace.attacks.push_back(spec);
  return trace;
}

LabeledTrace inject_impersonation(LabeledTrace trace, const AttackSpec& spec) {
  validate(spec, trace.scenario);
  if (spec.kind != AttackKind::kImpersonation) throw ContractError("inject_impersonation needs an IMPERSONATION spec");
  const auto attacker = records_in_window(trace, spec.target_vehicle, spec);
  require_present(attacker, spec.target_vehicle, spec, "attacker");
  require_present(records_in_window(trace, spec.victim_id, spec), spec.victim_id, spec, "victim");

  const int spec_index = static_cast<int>(trace.attacks.size());
  for (const std::size_t i : attacker) {
    trace.records[i].vehicle_id = spec.victim_id;
    trace.labels[i] = {AttackKind::kImpersonation, spec_index};
  }
  trace.attacks.push_back(spec);
  return trace;
}

LabeledTrace inject_false_info(LabeledTrace trace, const AttackSpec& spec, Rng& rng) {
  validate(spec, trace.scenario);
  if (spec.kind != AttackKind::kFalseInfo) throw ContractError("inject_false_info needs a FALSE_INFO spec");
  const auto hit = records_in_window(trace, spec.target_vehicle, spec);
  require_present(hit, spec.target_vehicle, spec, "target");

  const int spec_index = static_cast<int>(trace.attacks.size());
  const bool perturb = spec.lat_box > 0.0 || spec.lon_box > 0.0;
  for (const std::size_t i : hit) {
    auto& r = trace.records[i];
    if (perturb) {
      r.latitude = std::clamp(r.latitude + rng.uniform(-spec.lat_box, spec.lat_box), -90.0, 90.0);
      r.longitude = std::clamp(r.longitude + rng.uniform(-spec.lon_box, spec.lon_box), -180.0, 180.0);
      r.speed = rng.uniform(0.0, trace.scenario.speed_limit);
      r = quantize(r);
    }
    trace.labels[i] = {AttackKind::kFalseInfo, spec_index};
  }
  trace.attacks.push_back(spec);
  return trace;
}

LabeledTrace inject(LabeledTrace trace, const AttackSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case AttackKind::kDos: return inject_dos(std::move(trace), spec);
    case AttackKind::kImpersonation: return inject_impersonation(std::move(trace), spec);
    case AttackKind::kFalseInfo: return inject_false_info(std::move(trace), spec, rng);
    case AttackKind::kNone: break;
  }
  throw ContractError("attack kind must not be NONE");
}

LabeledTrace simulate(const ScenarioConfig& config, std::span<const AttackSpec> attacks) {
  Rng rng(config.seed);
  auto trace = generate_baseline(config, rng);
  for (const auto& spec : attacks) trace = inject(std::move(trace), spec, rng);
  return trace;
}

}  // namespace bsmsentinel
