#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bsmsentinel/bsm.hpp"

namespace bsmsentinel {

/// Column names of the native trace CSV, in write order.
inline constexpr const char* kTraceHeader =
    "timestamp,vehicle_id,latitude,longitude,speed,position_delta,msg_rate";

/// How a delimited trace is laid out. Columns are always located by header name;
/// the descriptor only controls tokenisation.
struct TraceFormat {
  char delimiter = ',';
  bool trim_whitespace = true;
  bool allow_comments = true;  // lines starting with '#'
};

/// Parses a header-bearing trace. Column order is free; `position_delta` and
/// `msg_rate` are optional. Header aliases such as "TS", "ID", "Lat.", "Long."
/// and "MsgRate" are accepted so abbreviated roadside-unit exports load unchanged.
///
/// Throws ParseError (bad arity or number), ValidationError (field out of
/// range) or OrderingError (timestamp decreased), each carrying the 1-based line.
std::vector<BsmRecord> parse_trace(std::istream& in, const TraceFormat& format = {});
std::vector<BsmRecord> read_trace_file(const std::filesystem::path& path,
                                       const TraceFormat& format = {});

/// Writes the native format. `position_delta` is recomputed against each
/// vehicle's previous record; a missing `msg_rate` is filled with the vehicle's
/// message count over the trailing second.
void write_trace(std::ostream& out, std::span<const BsmRecord> records);
void write_trace_file(const std::filesystem::path& path, std::span<const BsmRecord> records);

/// Rounds every field to the precision `write_trace` emits, so a written and
/// re-read trace compares equal to the in-memory one.
BsmRecord quantize(BsmRecord record) noexcept;

/// Shortest round-trip decimal with at least one fractional digit.
std::string format_decimal(double value);

}  // namespace bsmsentinel
