#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bsmsentinel/pipeline.hpp"
#include "bsmsentinel/scenario.hpp"

namespace bsmsentinel {

/// One `key = value` line. Keys before the first `[section]` have an empty
/// section; `block` counts section headers, so repeated sections stay distinct.
struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t block = 0;
};

/// Parses key-value text: `#` comments, blank lines, `[section]` headers and
/// `key = value` pairs. `source` names the input in error messages.
std::vector<ConfigEntry> parse_key_values(std::istream& in, const std::string& source);
std::vector<ConfigEntry> read_key_values_file(const std::filesystem::path& path);

/// Applies one detector setting; throws ConfigError on unknown keys or bad values.
void apply_detector_setting(DetectorConfig& config, std::string_view key, std::string_view value);

/// Detector keys, in the order they are documented.
const std::vector<std::string>& detector_setting_keys();

DetectorConfig load_detector_config(const std::vector<ConfigEntry>& entries,
                                     const std::string& source);
DetectorConfig load_detector_config_file(const std::filesystem::path& path);

/// Looks up an environment variable; injectable for tests.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_environment();

/// Overrides any detector key K from BSMSENTINEL_<K uppercased>.
void apply_env_overrides(DetectorConfig& config, const EnvLookup& env);

/// Scenario keys at top level; each `[attack]` section adds one AttackSpec.
struct ScenarioFile {
  ScenarioConfig scenario;
  std::vector<AttackSpec> attacks;
};

ScenarioFile load_scenario(const std::vector<ConfigEntry>& entries, const std::string& source);
ScenarioFile load_scenario_file(const std::filesystem::path& path);

}  // namespace bsmsentinel
