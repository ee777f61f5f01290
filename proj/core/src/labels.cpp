#include "bsmsentinel/labels.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "bsmsentinel/errors.hpp"
#include "bsmsentinel/trace_io.hpp"
#include "csv.hpp"

namespace bsmsentinel {

std::string_view to_string(AttackKind kind) noexcept {
  switch (kind) {
    case AttackKind::kNone: return "NONE";
    case AttackKind::kDos: return "DOS";
    case AttackKind::kImpersonation: return "IMPERSONATION";
    case AttackKind::kFalseInfo: return "FALSE_INFO";
  }
  return "?";
}

AttackKind parse_attack_kind(std::string_view s) {
  for (const auto k : {AttackKind::kNone, AttackKind::kDos, AttackKind::kImpersonation, AttackKind::kFalseInfo}) {
    if (to_string(k) == s) return k;
  }
  throw InputError("unknown attack kind '" + std::string(s) + "'");
}

void write_labels(std::ostream& out, const std::vector<LabelRow>& rows) {
  out << kLabelsHeader << '\n';
  fmt::memory_buffer buf;
  for (const auto& r : rows) {
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{},{},{},{}\n", format_decimal(r.timestamp), r.vehicle_id,
                   r.is_attack() ? "attack" : "normal", to_string(r.kind));
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

void write_labels_file(const std::filesystem::path& path, const std::vector<LabelRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write labels '" + path.string() + "'");
  write_labels(out, rows);
}

std::vector<LabelRow> read_labels(std::istream& in) {
  std::vector<LabelRow> rows;
  std::string raw;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = csv::trim(raw);
    if (line.empty()) continue;
    if (!header) {
      if (line != kLabelsHeader) throw ParseError(line_no, "expected header '" + std::string(kLabelsHeader) + "'");
      header = true;
      continue;
    }
    const auto f = csv::split(line, ',', true);
    if (f.size() != 4) throw ParseError(line_no, fmt::format("expected 4 fields, found {}", f.size()));
    LabelRow row;
    row.timestamp = csv::parse_double(f[0], line_no, "timestamp");
    row.vehicle_id = csv::parse_int(f[1], line_no, "vehicle_id");
    try {
      row.kind = parse_attack_kind(f[3]);
    } catch (const InputError& e) {
      throw ParseError(line_no, e.what());
    }
    const bool attack = f[2] == "attack";
    if ((!attack && f[2] != "normal") || attack != row.is_attack()) {
      throw ParseError(line_no, "label '" + std::string(f[2]) + "' disagrees with attack_kind");
    }
    rows.push_back(row);
  }
  if (!header) throw ParseError(line_no, "missing header row");
  return rows;
}

std::vector<LabelRow> read_labels_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open labels '" + path.string() + "'");
  return read_labels(in);
}

}  // namespace bsmsentinel
