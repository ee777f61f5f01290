#include "bsmsentinel/pipeline.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "bsmsentinel/errors.hpp"

namespace bsmsentinel {
namespace {

constexpr std::size_t kFeatureCount = std::size(kAllFeatures);

struct FeatureStream {
  std::vector<double> calibration;
  CusumParams cusum;
  CusumState cusum_state;
  MixtureModel init_model;
  MixtureModel model;
  std::deque<double> recent;
  std::size_t since_refit = 0;
};

struct VehicleState {
  std::int64_t first_window = 0;
  std::int64_t last_calibration_window = 0;
  bool calibrating = true;
  bool seen_first = false;
  std::array<FeatureStream, kFeatureCount> streams;
};

std::pair<double, double> mean_and_variance(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (const double x : v) mean += x;
  mean /= n;
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);
  return {mean, ss / (n - 1.0)};
}

}  // namespace

void validate(const DetectorConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(c.window_len > 0.0 && std::isfinite(c.window_len), "window_len must be positive");
  require(c.calibration_window_seconds > 0.0 && std::isfinite(c.calibration_window_seconds),
          "calibration_window_seconds must be positive");
  require(c.n_sigma > 0.0 && std::isfinite(c.n_sigma), "n_sigma must be positive");
  require(c.k_rule.sigma_multiple >= 0.0 && std::isfinite(c.k_rule.sigma_multiple), "k_rule must be non-negative");
  require(c.em_threshold > 0.0 && c.em_threshold < 1.0, "em_threshold must lie in (0, 1)");
  require(c.em_max_iter >= 1, "em_max_iter must be at least 1");
  require(c.em_tol >= 0.0 && std::isfinite(c.em_tol), "em_tol must be non-negative");
  require(c.em_offset_sigmas >= 0.0 && std::isfinite(c.em_offset_sigmas), "em_offset_sigmas must be non-negative");
}

DetectResult detect(std::span<const BsmRecord> records, const DetectorConfig& config,
                    std::span<const LabelRow> labels) {
  validate(config);
  const auto started = std::chrono::steady_clock::now();

  const auto samples = windowize(records, config.window_len);
  const auto calibration_windows =
      std::max<std::int64_t>(1, std::llround(config.calibration_window_seconds / config.window_len));
  const EmOptions em_options{config.em_max_iter, config.em_tol};

  DetectResult result;
  result.observations = samples.size();
  result.detections.reserve(samples.size() * kFeatureCount * std::size(kAllDetectors));
  std::map<VehicleId, VehicleState> vehicles;

  auto emit = [&](const FeatureSample& s, Feature f, Detector d, Decision decision, double score) {
    result.detections.push_back({s.vehicle_id, s.window_start, f, d, decision, score});
  };

  for (const auto& s : samples) {
    auto [it, fresh] = vehicles.try_emplace(s.vehicle_id);
    auto& v = it->second;
    if (fresh) v.first_window = s.window_index;

    if (v.calibrating) {
      const bool in_interval = s.window_index < v.first_window + calibration_windows;
      bool enough = true;
      for (const auto& stream : v.streams) enough = enough && stream.calibration.size() >= 2;

      if (in_interval || !enough) {
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
          // A vehicle's first displacement is a placeholder, not a measurement.
          if (kAllFeatures[f] == Feature::kDistance && !v.seen_first) continue;
          v.streams[f].calibration.push_back(feature_value(s, kAllFeatures[f]));
        }
        v.seen_first = true;
        v.last_calibration_window = s.window_index;
        for (const Feature f : kAllFeatures) {
          for (const Detector d : kAllDetectors) emit(s, f, d, Decision::kNoDetection, 0.0);
        }
        continue;
      }

      for (std::size_t f = 0; f < kFeatureCount; ++f) {
        auto& stream = v.streams[f];
        stream.cusum = cusum_calibrate(stream.calibration, config.n_sigma, config.k_rule);
        stream.cusum.one_sided = config.one_sided;
        stream.cusum.reset_on_detect = config.reset_on_detect;
        const auto [mean, variance] = mean_and_variance(stream.calibration);
        stream.init_model = em_initial_model(mean, variance, config.em_offset_sigmas);
        stream.model = stream.init_model;
        result.calibrations.push_back(
            {s.vehicle_id, kAllFeatures[f], stream.calibration.size(), stream.cusum, stream.model});
        stream.calibration.clear();
        stream.calibration.shrink_to_fit();
      }
      v.calibrating = false;
    }

    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      auto& stream = v.streams[f];
      const Feature feature = kAllFeatures[f];
      const double y = feature_value(s, feature);

      const auto step = cusum_step(stream.cusum_state, stream.cusum, y);
      stream.cusum_state = step.state;
      emit(s, feature, Detector::kCusum, step.decision, step.score);

      const double posterior = em_posterior(stream.model, y);
      emit(s, feature, Detector::kEm,
           posterior > config.em_threshold ? Decision::kDetection : Decision::kNoDetection, posterior);

      if (config.em_refit_every > 0) {
        stream.recent.push_back(y);
        if (stream.recent.size() > static_cast<std::size_t>(calibration_windows)) stream.recent.pop_front();
        if (++stream.since_refit >= config.em_refit_every) {
          stream.since_refit = 0;
          const std::vector<double> window(stream.recent.begin(), stream.recent.end());
          try {
            stream.model = em_fit(window, stream.init_model, em_options).model;
          } catch (const DegenerateDataError&) {
            // Constant window: nothing to separate, keep the current model.
          }
        }
      }
    }
  }

  if (!labels.empty()) {
    std::set<VehicleId> contaminated;
    for (const auto& row : labels) {
      if (!row.is_attack()) continue;
      const auto it = vehicles.find(row.vehicle_id);
      if (it == vehicles.end()) continue;
      if (window_index(row.timestamp, config.window_len) <= it->second.last_calibration_window) {
        contaminated.insert(row.vehicle_id);
      }
    }
    for (const VehicleId id : contaminated) {
      const auto message = fmt::format("calibration interval of vehicle {} contains labelled attack records", id);
      if (config.contamination == ContaminationPolicy::kError) throw CalibrationError(message);
      result.warnings.push_back(message);
    }
  }

  std::stable_sort(result.detections.begin(), result.detections.end(), [](const Detection& a, const Detection& b) {
    return std::tie(a.vehicle_id, a.window_start) < std::tie(b.vehicle_id, b.window_start);
  });
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

PipelineResult run_pipeline(const LabeledTrace& trace, const DetectorConfig& config) {
  const auto labels = trace.label_rows();
  auto detected = detect(trace.records, config, labels);

  PipelineResult out;
  out.report = score(detected.detections, labels, config.window_len);
  out.report.elapsed_seconds = detected.elapsed_seconds;
  if (detected.elapsed_seconds > 0.0) {
    out.report.throughput = static_cast<double>(detected.observations) / detected.elapsed_seconds;
  }
  out.detections = std::move(detected.detections);
  out.warnings = std::move(detected.warnings);
  return out;
}

}  // namespace bsmsentinel
