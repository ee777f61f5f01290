#include "bsmsentinel/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>

#include <fmt/format.h>

#include "bsmsentinel/errors.hpp"
#include "csv.hpp"

namespace bsmsentinel {
namespace {

double to_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out)) {
    throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, value));
  }
  return out;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError(fmt::format("{}: expected a non-negative integer, got '{}'", key, value));
  }
  return out;
}

std::int64_t to_signed(std::string_view key, std::string_view value) {
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, value));
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  std::string v(value);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(fmt::format("{}: expected true/false, got '{}'", key, value));
}

// Re-throws a value error with file:line context.
template <typename Fn>
void at(const ConfigEntry& e, const std::string& source, Fn&& fn) {
  try {
    fn();
  } catch (const Error& err) {
    throw ConfigError(fmt::format("{}:{}: {}", source, e.line, err.what()));
  }
}

void apply_scenario_setting(ScenarioConfig& c, std::string_view key, std::string_view value) {
  if (key == "duration") c.duration = to_double(key, value);
  else if (key == "lanes") c.lanes = static_cast<int>(to_signed(key, value));
  else if (key == "flow") c.flow = to_double(key, value);
  else if (key == "speed_limit") c.speed_limit = to_double(key, value);
  else if (key == "bsm_rate") c.bsm_rate = to_double(key, value);
  else if (key == "seed") c.seed = to_unsigned(key, value);
  else if (key == "entry_speed") c.entry_speed = to_double(key, value);
  else if (key == "acceleration") c.acceleration = to_double(key, value);
  else if (key == "anchor_lat") c.anchor_lat = to_double(key, value);
  else if (key == "anchor_lon") c.anchor_lon = to_double(key, value);
  else if (key == "lane_width") c.lane_width = to_double(key, value);
  else throw ConfigError(fmt::format("unknown scenario key '{}'", key));
}

void apply_attack_setting(AttackSpec& a, std::string_view key, std::string_view value) {
  if (key == "kind") {
    try {
      a.kind = parse_attack_kind(value);
    } catch (const InputError&) {
      throw ConfigError(fmt::format("kind: expected DOS, IMPERSONATION or FALSE_INFO, got '{}'", value));
    }
  } else if (key == "target" || key == "target_vehicle") a.target_vehicle = to_signed(key, value);
  else if (key == "onset") a.onset = to_double(key, value);
  else if (key == "duration") a.duration = to_double(key, value);
  else if (key == "rate" || key == "dos_rate") a.dos_rate = to_double(key, value);
  else if (key == "victim" || key == "victim_id") a.victim_id = to_signed(key, value);
  else if (key == "lat_box") a.lat_box = to_double(key, value);
  else if (key == "lon_box") a.lon_box = to_double(key, value);
  else throw ConfigError(fmt::format("unknown attack key '{}'", key));
}

void apply_forced_setting(ForcedVehicle& f, std::string_view key, std::string_view value) {
  if (key == "spawn_time") f.spawn_time = to_double(key, value);
  else if (key == "lane") f.lane = static_cast<int>(to_signed(key, value));
  else if (key == "entry_speed") f.entry_speed = to_double(key, value);
  else throw ConfigError(fmt::format("unknown vehicle key '{}'", key));
}

}  // namespace

std::vector<ConfigEntry> parse_key_values(std::istream& in, const std::string& source) {
  std::vector<ConfigEntry> entries;
  std::string section;
  std::size_t block = 0;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = csv::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(fmt::format("{}:{}: unterminated section header", source, line_no));
      section = std::string(csv::trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw ConfigError(fmt::format("{}:{}: empty section name", source, line_no));
      ++block;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("{}:{}: expected 'key = value'", source, line_no));
    }
    ConfigEntry e{section, std::string(csv::trim(line.substr(0, eq))), std::string(csv::trim(line.substr(eq + 1))),
                  line_no, block};
    if (e.key.empty()) throw ConfigError(fmt::format("{}:{}: missing key", source, line_no));
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<ConfigEntry> read_key_values_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  return parse_key_values(in, path.string());
}

const std::vector<std::string>& detector_setting_keys() {
  static const std::vector<std::string> keys = {
      "window_len", "calibration_window_seconds", "n_sigma",  "k_rule",          "reset_on_detect",
      "one_sided",  "em_threshold",               "em_max_iter", "em_tol",       "em_offset_sigmas",
      "em_refit_every", "contamination"};
  return keys;
}

void apply_detector_setting(DetectorConfig& c, std::string_view key, std::string_view value) {
  if (key == "window_len") c.window_len = to_double(key, value);
  else if (key == "calibration_window_seconds") c.calibration_window_seconds = to_double(key, value);
  else if (key == "n_sigma") c.n_sigma = to_double(key, value);
  else if (key == "k_rule") c.k_rule = parse_k_rule(value);
  else if (key == "reset_on_detect") c.reset_on_detect = to_bool(key, value);
  else if (key == "one_sided") c.one_sided = to_bool(key, value);
  else if (key == "em_threshold") c.em_threshold = to_double(key, value);
  else if (key == "em_max_iter") c.em_max_iter = to_unsigned(key, value);
  else if (key == "em_tol") c.em_tol = to_double(key, value);
  else if (key == "em_offset_sigmas") c.em_offset_sigmas = to_double(key, value);
  else if (key == "em_refit_every") c.em_refit_every = to_unsigned(key, value);
  else if (key == "contamination") {
    if (value == "error") c.contamination = ContaminationPolicy::kError;
    else if (value == "proceed") c.contamination = ContaminationPolicy::kProceed;
    else throw ConfigError(fmt::format("contamination: expected 'error' or 'proceed', got '{}'", value));
  } else {
    throw ConfigError(fmt::format("unknown detector key '{}'", key));
  }
}

DetectorConfig load_detector_config(const std::vector<ConfigEntry>& entries, const std::string& source) {
  DetectorConfig config;
  for (const auto& e : entries) {
    if (!e.section.empty() && e.section != "detector") {
      throw ConfigError(fmt::format("{}:{}: unexpected section [{}]", source, e.line, e.section));
    }
    at(e, source, [&] { apply_detector_setting(config, e.key, e.value); });
  }
  try {
    validate(config);
  } catch (const ConfigError& err) {
    throw ConfigError(fmt::format("{}: {}", source, err.what()));
  }
  return config;
}

DetectorConfig load_detector_config_file(const std::filesystem::path& path) {
  return load_detector_config(read_key_values_file(path), path.string());
}

EnvLookup process_environment() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  };
}

void apply_env_overrides(DetectorConfig& config, const EnvLookup& env) {
  for (const auto& key : detector_setting_keys()) {
    std::string name = "BSMSENTINEL_" + key;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
    if (const auto value = env(name)) {
      try {
        apply_detector_setting(config, key, csv::trim(*value));
      } catch (const ConfigError& err) {
        throw ConfigError(fmt::format("{}: {}", name, err.what()));
      }
    }
  }
  validate(config);
}

ScenarioFile load_scenario(const std::vector<ConfigEntry>& entries, const std::string& source) {
  ScenarioFile file;
  std::size_t block = 0;
  for (const auto& e : entries) {
    if (e.section.empty()) {
      at(e, source, [&] { apply_scenario_setting(file.scenario, e.key, e.value); });
      continue;
    }
    const bool opens = e.block != block;
    block = e.block;
    if (e.section == "attack") {
      if (opens) file.attacks.emplace_back();
      at(e, source, [&] { apply_attack_setting(file.attacks.back(), e.key, e.value); });
    } else if (e.section == "vehicle") {
      if (opens) file.scenario.forced.emplace_back();
      at(e, source, [&] { apply_forced_setting(file.scenario.forced.back(), e.key, e.value); });
    } else {
      throw ConfigError(fmt::format("{}:{}: unknown section [{}]", source, e.line, e.section));
    }
  }
  try {
    validate(file.scenario);
    for (const auto& a : file.attacks) validate(a, file.scenario);
  } catch (const ContractError& err) {
    throw ConfigError(fmt::format("{}: {}", source, err.what()));
  }
  return file;
}

ScenarioFile load_scenario_file(const std::filesystem::path& path) {
  return load_scenario(read_key_values_file(path), path.string());
}

}  // namespace bsmsentinel
