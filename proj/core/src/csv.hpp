#pragma once

// Small delimited-text helpers shared by the readers. Not installed.

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bsmsentinel/errors.hpp"

namespace bsmsentinel::csv {

inline std::string_view trim(std::string_view s) noexcept {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view line, char delim, bool trim_fields) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    auto field = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    out.push_back(trim_fields ? trim(field) : field);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(std::string_view text, std::size_t line, std::string_view field) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  // from_chars rejects a leading '+', which some exporters write.
  const char* begin = (!text.empty() && text.front() == '+') ? text.data() + 1 : text.data();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(line, "cannot parse " + std::string(field) + " from '" + std::string(text) + "'");
  }
  return value;
}

inline std::int64_t parse_int(std::string_view text, std::size_t line, std::string_view field) {
  std::int64_t value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(line, "cannot parse " + std::string(field) + " from '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace bsmsentinel::csv
