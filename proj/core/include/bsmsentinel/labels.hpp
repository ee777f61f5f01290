#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "bsmsentinel/bsm.hpp"

namespace bsmsentinel {

enum class AttackKind : std::uint8_t { kNone, kDos, kImpersonation, kFalseInfo };

std::string_view to_string(AttackKind kind) noexcept;  // "NONE", "DOS", ...
AttackKind parse_attack_kind(std::string_view s);

/// Ground truth for one trace record.
struct LabelRow {
  double timestamp = 0.0;
  VehicleId vehicle_id = 0;
  AttackKind kind = AttackKind::kNone;

  bool is_attack() const noexcept { return kind != AttackKind::kNone; }
  friend bool operator==(const LabelRow&, const LabelRow&) = default;
};

inline constexpr const char* kLabelsHeader = "timestamp,vehicle_id,label,attack_kind";

void write_labels(std::ostream& out, const std::vector<LabelRow>& rows);
void write_labels_file(const std::filesystem::path& path, const std::vector<LabelRow>& rows);
std::vector<LabelRow> read_labels(std::istream& in);
std::vector<LabelRow> read_labels_file(const std::filesystem::path& path);

}  // namespace bsmsentinel
