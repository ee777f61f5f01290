#include "bsmsentinel/metrics.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bsmsentinel/errors.hpp"
#include "bsmsentinel/features.hpp"

namespace bsmsentinel {
namespace {

using WindowKey = std::pair<VehicleId, std::int64_t>;

constexpr unsigned bit(AttackKind k) noexcept { return 1u << static_cast<unsigned>(k); }

constexpr AttackKind kAttackKinds[] = {AttackKind::kDos, AttackKind::kImpersonation, AttackKind::kFalseInfo};

struct Episode {
  double onset = 0.0;
  double last = 0.0;
};

double ratio(std::size_t num, std::size_t den) noexcept {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

const GroupMetrics* MetricsReport::find(AttackKind kind, Detector detector, Feature feature) const noexcept {
  for (const auto& g : groups) {
    if (g.kind == kind && g.detector == detector && g.feature == feature) return &g;
  }
  return nullptr;
}

MetricsReport score(std::span<const Detection> detections, std::span<const LabelRow> labels,
                    double matching_window) {
  if (!(matching_window > 0.0)) throw ContractError("matching window must be positive");

  // Bit 0 (NONE) marks that the window holds at least one record.
  std::map<WindowKey, unsigned> truth;
  std::map<std::pair<AttackKind, VehicleId>, Episode> episodes;
  unsigned kinds_present = 0;
  for (const auto& row : labels) {
    truth[{row.vehicle_id, window_index(row.timestamp, matching_window)}] |= bit(AttackKind::kNone) | bit(row.kind);
    if (!row.is_attack()) continue;
    kinds_present |= bit(row.kind);
    auto [it, fresh] = episodes.try_emplace({row.kind, row.vehicle_id}, Episode{row.timestamp, row.timestamp});
    if (!fresh) {
      it->second.onset = std::min(it->second.onset, row.timestamp);
      it->second.last = std::max(it->second.last, row.timestamp);
    }
  }

  std::map<std::pair<Detector, Feature>, std::vector<std::pair<WindowKey, const Detection*>>> by_group;
  std::set<WindowKey> covered;
  for (const auto& d : detections) {
    const WindowKey key{d.vehicle_id, window_index(d.window_start, matching_window)};
    if (!truth.contains(key)) {
      throw ContractError(fmt::format("detection for vehicle {} at {} s has no labelled records; "
                                      "detections and labels describe different traces",
                                      d.vehicle_id, d.window_start));
    }
    covered.insert(key);
    by_group[{d.detector, d.feature}].emplace_back(key, &d);
  }
  if (covered.size() != truth.size()) {
    throw ContractError(fmt::format("labels cover {} vehicle windows but detections only {}; "
                                    "detections and labels describe different traces",
                                    truth.size(), covered.size()));
  }

  std::vector<AttackKind> kinds;
  for (const auto k : kAttackKinds) {
    if (kinds_present & bit(k)) kinds.push_back(k);
  }
  if (kinds.empty()) kinds.push_back(AttackKind::kNone);

  MetricsReport report;
  report.window_len = matching_window;
  for (const auto kind : kinds) {
    for (const auto& [group_key, entries] : by_group) {
      GroupMetrics g;
      g.kind = kind;
      g.detector = group_key.first;
      g.feature = group_key.second;

      const unsigned attacks_mask = ~(bit(AttackKind::kNone));
      for (const auto& [key, det] : entries) {
        const unsigned mask = truth.at(key);
        const bool positive = kind != AttackKind::kNone && (mask & bit(kind));
        if (!positive && (mask & attacks_mask)) continue;  // attacked by another kind only
        const bool flagged = det->detected();
        if (positive) {
          (flagged ? g.tp : g.fn) += 1;
        } else {
          (flagged ? g.fp : g.tn) += 1;
        }
      }
      const std::size_t total = g.total();
      g.accuracy = total == 0 ? 1.0 : 1.0 - ratio(g.fp + g.fn, total);
      g.false_positive_rate = ratio(g.fp, g.fp + g.tn);
      g.false_negative_rate = ratio(g.fn, g.fn + g.tp);

      for (const auto& [ep_key, ep] : episodes) {
        if (ep_key.first != kind) continue;
        ++g.episodes;
        const auto first = window_index(ep.onset, matching_window);
        const auto last = window_index(ep.last, matching_window);
        const Detection* earliest = nullptr;
        std::int64_t earliest_idx = 0;
        for (const auto& [key, det] : entries) {
          if (key.first != ep_key.second || !det->detected() || key.second < first || key.second > last) continue;
          if (!earliest || key.second < earliest_idx) {
            earliest = det;
            earliest_idx = key.second;
          }
        }
        if (!earliest) continue;
        ++g.episodes_detected;
        const auto windows = earliest_idx - first;
        const double seconds = std::max(0.0, earliest->window_start - ep.onset);
        g.latency_windows = std::max(g.latency_windows.value_or(0), windows);
        g.latency_seconds = std::max(g.latency_seconds.value_or(0.0), seconds);
      }
      report.groups.push_back(g);
    }
  }
  return report;
}

void write_metrics_table(std::ostream& out, const MetricsReport& report) {
  out << fmt::format("{:<14} {:<6} {:<9} {:>9} {:>8} {:>8} {:>8} {:>8} {:>9} {:>9} {:>10} {:>8}\n", "attack",
                     "det", "feature", "accuracy", "fpr", "fnr", "tp", "fp", "fn", "tn", "latency_s", "lat_win");
  for (const auto& g : report.groups) {
    const std::string lat_s = g.latency_seconds ? fmt::format("{:.3f}", *g.latency_seconds) : "-";
    const std::string lat_w = g.latency_windows ? fmt::format("{}", *g.latency_windows) : "-";
    out << fmt::format("{:<14} {:<6} {:<9} {:>9.5f} {:>8.5f} {:>8.5f} {:>8} {:>8} {:>9} {:>9} {:>10} {:>8}\n",
                       to_string(g.kind), to_string(g.detector), to_string(g.feature), g.accuracy,
                       g.false_positive_rate, g.false_negative_rate, g.tp, g.fp, g.fn, g.tn, lat_s, lat_w);
  }
  out << fmt::format("window_len = {} s\n", report.window_len);
  if (report.throughput) out << fmt::format("throughput = {:.0f} observations/s\n", *report.throughput);
}

std::string metrics_json(const MetricsReport& report, bool include_timing) {
  nlohmann::json root;
  root["window_len"] = report.window_len;
  auto& groups = root["groups"] = nlohmann::json::array();
  for (const auto& g : report.groups) {
    nlohmann::json j;
    j["attack_kind"] = std::string(to_string(g.kind));
    j["detector"] = std::string(to_string(g.detector));
    j["feature"] = std::string(to_string(g.feature));
    j["tp"] = g.tp;
    j["fp"] = g.fp;
    j["tn"] = g.tn;
    j["fn"] = g.fn;
    j["accuracy"] = g.accuracy;
    j["false_positive_rate"] = g.false_positive_rate;
    j["false_negative_rate"] = g.false_negative_rate;
    j["episodes"] = g.episodes;
    j["episodes_detected"] = g.episodes_detected;
    j["latency_windows"] = g.latency_windows ? nlohmann::json(*g.latency_windows) : nlohmann::json(nullptr);
    j["latency_seconds"] = g.latency_seconds ? nlohmann::json(*g.latency_seconds) : nlohmann::json(nullptr);
    groups.push_back(std::move(j));
  }
  if (include_timing && (report.throughput || report.elapsed_seconds)) {
    auto& timing = root["timing"];
    if (report.throughput) timing["throughput_obs_per_s"] = *report.throughput;
    if (report.elapsed_seconds) timing["elapsed_seconds"] = *report.elapsed_seconds;
  }
  return root.dump(2) + "\n";
}

}  // namespace bsmsentinel
