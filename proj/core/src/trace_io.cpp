#include "bsmsentinel/trace_io.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <unordered_map>

#include <fmt/format.h>

#include "bsmsentinel/errors.hpp"
#include "bsmsentinel/geo.hpp"
#include "csv.hpp"

namespace bsmsentinel {
namespace {

enum Column : std::size_t { kTimestamp, kVehicleId, kLatitude, kLongitude, kSpeed, kPositionDelta, kMsgRate, kColumnCount };

constexpr std::array<const char*, kColumnCount> kColumnNames = {
    "timestamp", "vehicle_id", "latitude", "longitude", "speed", "position_delta", "msg_rate"};

// Header cell reduced to lowercase alphanumerics, so "Lat.", "Speed(m/s)" and
// "vehicle_id" normalise to "lat", "speedms" and "vehicleid".
std::string normalise(std::string_view cell) {
  std::string out;
  for (const char c : cell) {
    if (std::isalnum(static_cast<unsigned char>(c))) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::optional<Column> column_for(std::string_view cell) {
  static const std::unordered_map<std::string, Column> aliases = {
      {"timestamp", kTimestamp},     {"ts", kTimestamp},         {"tss", kTimestamp},
      {"time", kTimestamp},          {"vehicleid", kVehicleId},  {"id", kVehicleId},
      {"latitude", kLatitude},       {"lat", kLatitude},         {"longitude", kLongitude},
      {"long", kLongitude},          {"lon", kLongitude},        {"lng", kLongitude},
      {"speed", kSpeed},             {"speedms", kSpeed},        {"spdms", kSpeed},
      {"positiondelta", kPositionDelta}, {"pos", kPositionDelta}, {"posm", kPositionDelta},
      {"msgrate", kMsgRate},
  };
  const auto it = aliases.find(normalise(cell));
  if (it == aliases.end()) return std::nullopt;
  return it->second;
}

void check_range(double value, double lo, double hi, std::size_t line, const char* field) {
  if (!std::isfinite(value) || value < lo || value > hi) {
    throw ValidationError(line, field, fmt::format("value {} outside [{}, {}]", value, lo, hi));
  }
}

}  // namespace

std::vector<BsmRecord> parse_trace(std::istream& in, const TraceFormat& format) {
  std::vector<BsmRecord> records;
  std::array<std::optional<std::size_t>, kColumnCount> index{};
  std::size_t arity = 0;
  bool have_header = false;
  double last_ts = 0.0;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (csv::trim(line).empty()) continue;
    if (format.allow_comments && csv::trim(line).front() == '#') continue;

    const auto fields = csv::split(line, format.delimiter, format.trim_whitespace);
    if (!have_header) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (const auto col = column_for(fields[i])) {
          if (index[*col]) throw ParseError(line_no, fmt::format("duplicate column '{}'", fields[i]));
          index[*col] = i;
        }
      }
      for (const Column required : {kTimestamp, kVehicleId, kLatitude, kLongitude, kSpeed}) {
        if (!index[required]) {
          throw ParseError(line_no, fmt::format("header lacks column '{}'", kColumnNames[required]));
        }
      }
      arity = fields.size();
      have_header = true;
      continue;
    }

    if (fields.size() != arity) {
      throw ParseError(line_no, fmt::format("expected {} fields, found {}", arity, fields.size()));
    }
    auto number = [&](Column c) { return csv::parse_double(fields[*index[c]], line_no, kColumnNames[c]); };

    BsmRecord r;
    r.timestamp = number(kTimestamp);
    r.vehicle_id = csv::parse_int(fields[*index[kVehicleId]], line_no, "vehicle_id");
    r.latitude = number(kLatitude);
    r.longitude = number(kLongitude);
    r.speed = number(kSpeed);
    if (index[kMsgRate] && !fields[*index[kMsgRate]].empty()) r.msg_rate = number(kMsgRate);

    check_range(r.timestamp, 0.0, INFINITY, line_no, "timestamp");
    check_range(r.latitude, -90.0, 90.0, line_no, "latitude");
    check_range(r.longitude, -180.0, 180.0, line_no, "longitude");
    check_range(r.speed, 0.0, INFINITY, line_no, "speed");
    if (r.msg_rate) check_range(*r.msg_rate, 0.0, INFINITY, line_no, "msg_rate");
    if (index[kPositionDelta] && !fields[*index[kPositionDelta]].empty()) {
      check_range(number(kPositionDelta), 0.0, INFINITY, line_no, "position_delta");
    }

    if (!records.empty() && r.timestamp < last_ts) {
      throw OrderingError(line_no, fmt::format("timestamp {} precedes {}", r.timestamp, last_ts));
    }
    last_ts = r.timestamp;
    records.push_back(r);
  }
  if (!have_header) throw ParseError(line_no, "missing header row");
  return records;
}

std::vector<BsmRecord> read_trace_file(const std::filesystem::path& path, const TraceFormat& format) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trace '" + path.string() + "'");
  return parse_trace(in, format);
}

std::string format_decimal(double value) {
  std::string s = fmt::format("{}", value);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

void write_trace(std::ostream& out, std::span<const BsmRecord> records) {
  out << kTraceHeader << '\n';
  std::unordered_map<VehicleId, BsmRecord> previous;
  std::unordered_map<VehicleId, std::deque<double>> recent;
  fmt::memory_buffer buf;
  for (const auto& r : records) {
    double delta = 0.0;
    if (const auto it = previous.find(r.vehicle_id); it != previous.end()) {
      delta = position_delta(it->second, r);
    }
    previous[r.vehicle_id] = r;

    double rate = 0.0;
    if (r.msg_rate) {
      rate = *r.msg_rate;
    } else {
      auto& window = recent[r.vehicle_id];
      window.push_back(r.timestamp);
      while (window.front() <= r.timestamp - 1.0) window.pop_front();
      rate = static_cast<double>(window.size());
    }

    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{:.6f},{}\n", format_decimal(r.timestamp),
                   r.vehicle_id, format_decimal(r.latitude), format_decimal(r.longitude),
                   format_decimal(r.speed), delta, format_decimal(rate));
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

void write_trace_file(const std::filesystem::path& path, std::span<const BsmRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write trace '" + path.string() + "'");
  write_trace(out, records);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

BsmRecord quantize(BsmRecord r) noexcept {
  auto round_to = [](double v, double scale) { return std::round(v * scale) / scale; };
  r.timestamp = round_to(r.timestamp, 1e6);
  r.latitude = round_to(r.latitude, 1e12);
  r.longitude = round_to(r.longitude, 1e12);
  r.speed = round_to(r.speed, 1e6);
  if (r.msg_rate) r.msg_rate = round_to(*r.msg_rate, 1e6);
  return r;
}

}  // namespace bsmsentinel
