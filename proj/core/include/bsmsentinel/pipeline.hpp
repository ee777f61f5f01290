#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bsmsentinel/bsm.hpp"
#include "bsmsentinel/cusum.hpp"
#include "bsmsentinel/detection.hpp"
#include "bsmsentinel/features.hpp"
#include "bsmsentinel/labels.hpp"
#include "bsmsentinel/metrics.hpp"
#include "bsmsentinel/mixture.hpp"
#include "bsmsentinel/scenario.hpp"

namespace bsmsentinel {

enum class ContaminationPolicy { kProceed, kError };

struct DetectorConfig {
  double window_len = kDefaultWindowLen;
  double calibration_window_seconds = 5.0;
  double n_sigma = 5.0;
  KRule k_rule = KRule::half_sigma();
  bool reset_on_detect = true;
  bool one_sided = false;
  double em_threshold = kDefaultEmThreshold;
  std::size_t em_max_iter = 200;
  double em_tol = 1e-8;
  double em_offset_sigmas = 5.0;
  // Refit the mixture every N scored windows on the last calibration-window's
  // worth of observations; 0 keeps the calibrated model frozen.
  std::size_t em_refit_every = 0;
  ContaminationPolicy contamination = ContaminationPolicy::kProceed;
};

/// Throws ConfigError on out-of-range settings.
void validate(const DetectorConfig& config);

/// Fitted detector parameters for one (vehicle, feature) stream.
struct StreamCalibration {
  VehicleId vehicle_id = 0;
  Feature feature = Feature::kMvs;
  std::size_t samples = 0;
  CusumParams cusum;
  MixtureModel mixture;
};

struct DetectResult {
  std::vector<Detection> detections;  // ordered by vehicle, window, feature, detector
  std::vector<StreamCalibration> calibrations;
  std::vector<std::string> warnings;
  std::size_t observations = 0;       // window samples processed
  double elapsed_seconds = 0.0;
};

/// Windowise, calibrate each vehicle on its own leading attack-free interval,
/// then run CUSUM and the mixture test on MVS, MVT and displacement.
///
/// While a vehicle is still inside its calibration interval every verdict is
/// ND with score 0. `labels`, when given, is used only to check that no
/// calibration interval holds an attack.
DetectResult detect(std::span<const BsmRecord> records, const DetectorConfig& config,
                    std::span<const LabelRow> labels = {});

struct PipelineResult {
  std::vector<Detection> detections;
  MetricsReport report;
  std::vector<std::string> warnings;
};

/// ingest -> windowize -> calibrate -> detect -> score.
PipelineResult run_pipeline(const LabeledTrace& trace, const DetectorConfig& config);

}  // namespace bsmsentinel
