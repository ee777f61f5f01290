#include "bsmsentinel/features.hpp"

#include <cmath>
#include <string>

#include "bsmsentinel/errors.hpp"
#include "bsmsentinel/geo.hpp"

namespace bsmsentinel {

std::int64_t window_index(double timestamp, double window_len) noexcept {
  // Timestamps carry six decimals; 1e-6 of a window is below that resolution
  // for any window of 1 s or less.
  return static_cast<std::int64_t>(std::floor(timestamp / window_len + 1e-6));
}

Windowizer::Windowizer(double window_len) : window_len_(window_len) {
  if (!(window_len > 0.0) || !std::isfinite(window_len)) {
    throw ContractError("window length must be positive, got " + std::to_string(window_len));
  }
}

void Windowizer::push(const BsmRecord& record, std::vector<FeatureSample>& out) {
  const std::int64_t idx = window_index(record.timestamp, window_len_);
  if (open_ && idx < current_) {
    throw ContractError("windowize: records must be sorted by timestamp");
  }
  if (open_ && idx > current_) emit(out);
  current_ = idx;
  open_ = true;

  auto& slot = pending_[record.vehicle_id];
  ++slot.count;
  slot.last = record;
}

void Windowizer::flush(std::vector<FeatureSample>& out) {
  if (open_) emit(out);
  open_ = false;
}

void Windowizer::emit(std::vector<FeatureSample>& out) {
  for (const auto& [id, slot] : pending_) {
    FeatureSample s;
    s.vehicle_id = id;
    s.window_index = current_;
    // Rounded to the trace's microsecond grid so it survives a CSV round trip.
    s.window_start = std::round(static_cast<double>(current_) * window_len_ * 1e6) / 1e6;
    s.window_len = window_len_;
    s.mvt = slot.count;
    s.mvs = static_cast<double>(slot.count) / window_len_;
    if (auto it = last_seen_.find(id); it != last_seen_.end()) {
      s.displacement = position_delta(it->second, slot.last);
      it->second = slot.last;
    } else {
      last_seen_.emplace(id, slot.last);
    }
    out.push_back(s);
  }
  pending_.clear();
}

std::vector<FeatureSample> windowize(std::span<const BsmRecord> records, double window_len) {
  Windowizer w(window_len);
  std::vector<FeatureSample> out;
  for (const auto& r : records) w.push(r, out);
  w.flush(out);
  return out;
}

}  // namespace bsmsentinel
