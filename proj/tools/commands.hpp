#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "bsmsentinel/config.hpp"

namespace bsmsentinel::cli {

namespace fs = std::filesystem;

enum class MetricsFormat { kBoth, kTable, kMachine };

struct CommonOptions {
  std::optional<fs::path> config;
  std::optional<std::uint64_t> seed;
  fs::path out = ".";
  MetricsFormat format = MetricsFormat::kBoth;
  EnvLookup env = process_environment();
};

struct DetectOptions {
  fs::path trace;
  std::optional<fs::path> labels;  // enables the calibration contamination check
};

struct EvaluateOptions {
  fs::path detections;
  fs::path labels;
  std::optional<double> window;
};

struct CalibrateOptions {
  fs::path trace;
  bool fit = false;  // also fit the mixture to each full stream
};

// Each command writes its data files plus manifest.<command>.json into
// `common.out`, reports problems on `err`, and returns the process exit status.
int cmd_simulate(const CommonOptions& common, std::ostream& err);
int cmd_detect(const CommonOptions& common, const DetectOptions& options, std::ostream& err);
int cmd_evaluate(const CommonOptions& common, const EvaluateOptions& options, std::ostream& err);
int cmd_calibrate(const CommonOptions& common, const CalibrateOptions& options, std::ostream& err);

/// Detector settings: file, then BSMSENTINEL_* environment overrides.
DetectorConfig resolve_detector_config(const CommonOptions& common);

/// Scenario settings: file, then BSMSENTINEL_SEED, then --seed.
ScenarioFile resolve_scenario(const CommonOptions& common);

}  // namespace bsmsentinel::cli
