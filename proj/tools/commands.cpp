#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <utility>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "bsmsentinel/errors.hpp"
#include "bsmsentinel/features.hpp"
#include "bsmsentinel/labels.hpp"
#include "bsmsentinel/pipeline.hpp"
#include "bsmsentinel/scenario.hpp"
#include "bsmsentinel/trace_io.hpp"
#include "bsmsentinel/version.hpp"

namespace bsmsentinel::cli {
namespace {

using Clock = std::chrono::steady_clock;

class Manifest {
 public:
  Manifest(std::string subcommand, const CommonOptions& common) : started_(Clock::now()) {
    doc_["subcommand"] = std::move(subcommand);
    doc_["version"] = version();
    doc_["config"] = common.config ? nlohmann::json::array({common.config->string()}) : nlohmann::json::array();
    doc_["inputs"] = nlohmann::json::array();
    doc_["outputs"] = nlohmann::json::array();
  }

  void seed(std::uint64_t s) { doc_["seed"] = s; }
  void input(const fs::path& p) { doc_["inputs"].push_back(p.string()); }
  void output(const fs::path& p) { doc_["outputs"].push_back(p.string()); }
  void stage(const std::string& name, double seconds) { doc_["timings"][name] = seconds; }

  void write(const fs::path& dir) {
    const auto path = dir / ("manifest." + doc_["subcommand"].get<std::string>() + ".json");
    doc_["timings"]["wall_seconds"] = std::chrono::duration<double>(Clock::now() - started_).count();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write manifest '" + path.string() + "'");
    out << doc_.dump(2) << '\n';
  }

 private:
  nlohmann::json doc_;
  Clock::time_point started_;
};

template <typename Fn>
int guarded(std::ostream& err, const char* command, Fn&& fn) {
  try {
    fn();
    return 0;
  } catch (const std::exception& e) {
    err << "bsmsentinel " << command << ": " << e.what() << '\n';
    return 1;
  }
}

void prepare_out(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory '" + dir.string() + "'");
}

// Prefixes reader errors with the file they came from.
template <typename Fn>
auto reading(const fs::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw Error(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw Error(path.string() + ": " + e.what());
  } catch (const OrderingError& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace

DetectorConfig resolve_detector_config(const CommonOptions& common) {
  DetectorConfig config = common.config ? load_detector_config_file(*common.config) : DetectorConfig{};
  apply_env_overrides(config, common.env);
  return config;
}

ScenarioFile resolve_scenario(const CommonOptions& common) {
  ScenarioFile file = common.config ? load_scenario_file(*common.config) : ScenarioFile{};
  if (const auto env_seed = common.env("BSMSENTINEL_SEED")) {
    try {
      file.scenario.seed = std::stoull(*env_seed);
    } catch (const std::exception&) {
      throw ConfigError("BSMSENTINEL_SEED: expected an unsigned integer, got '" + *env_seed + "'");
    }
  }
  if (common.seed) file.scenario.seed = *common.seed;
  return file;
}

int cmd_simulate(const CommonOptions& common, std::ostream& err) {
  return guarded(err, "simulate", [&] {
    Manifest manifest("simulate", common);
    const auto scenario = resolve_scenario(common);
    manifest.seed(scenario.scenario.seed);
    prepare_out(common.out);

    const auto t0 = Clock::now();
    const auto trace = simulate(scenario.scenario, scenario.attacks);
    manifest.stage("simulate_seconds", std::chrono::duration<double>(Clock::now() - t0).count());

    const auto trace_path = common.out / "trace.csv";
    const auto labels_path = common.out / "labels.csv";
    write_trace_file(trace_path, trace.records);
    write_labels_file(labels_path, trace.label_rows());
    manifest.output(trace_path);
    manifest.output(labels_path);
    manifest.write(common.out);
  });
}

int cmd_detect(const CommonOptions& common, const DetectOptions& options, std::ostream& err) {
  return guarded(err, "detect", [&] {
    Manifest manifest("detect", common);
    const auto config = resolve_detector_config(common);
    prepare_out(common.out);

    const auto records = reading(options.trace, [&] { return read_trace_file(options.trace); });
    manifest.input(options.trace);
    std::vector<LabelRow> labels;
    if (options.labels) {
      labels = reading(*options.labels, [&] { return read_labels_file(*options.labels); });
      manifest.input(*options.labels);
    }

    const auto result = detect(records, config, labels);
    for (const auto& w : result.warnings) err << "bsmsentinel detect: warning: " << w << '\n';
    manifest.stage("detect_seconds", result.elapsed_seconds);

    const auto path = common.out / "detections.csv";
    write_detections_file(path, result.detections);
    manifest.output(path);
    manifest.write(common.out);
  });
}

int cmd_evaluate(const CommonOptions& common, const EvaluateOptions& options, std::ostream& err) {
  return guarded(err, "evaluate", [&] {
    Manifest manifest("evaluate", common);
    const double window = options.window ? *options.window : resolve_detector_config(common).window_len;
    prepare_out(common.out);

    const auto detections = reading(options.detections, [&] { return read_detections_file(options.detections); });
    const auto labels = reading(options.labels, [&] { return read_labels_file(options.labels); });
    manifest.input(options.detections);
    manifest.input(options.labels);

    const auto report = score(detections, labels, window);
    if (common.format != MetricsFormat::kMachine) {
      const auto path = common.out / "metrics.txt";
      std::ofstream out(path, std::ios::binary);
      if (!out) throw Error("cannot write '" + path.string() + "'");
      write_metrics_table(out, report);
      manifest.output(path);
    }
    if (common.format != MetricsFormat::kTable) {
      const auto path = common.out / "metrics.json";
      std::ofstream out(path, std::ios::binary);
      if (!out) throw Error("cannot write '" + path.string() + "'");
      out << metrics_json(report);
      manifest.output(path);
    }
    manifest.write(common.out);
  });
}

int cmd_calibrate(const CommonOptions& common, const CalibrateOptions& options, std::ostream& err) {
  return guarded(err, "calibrate", [&] {
    Manifest manifest("calibrate", common);
    const auto config = resolve_detector_config(common);
    prepare_out(common.out);

    const auto records = reading(options.trace, [&] { return read_trace_file(options.trace); });
    manifest.input(options.trace);
    const auto result = detect(records, config);

    // Full per-stream series, only needed for --fit.
    std::map<std::pair<VehicleId, Feature>, std::vector<double>> series;
    if (options.fit) {
      std::map<VehicleId, bool> seen;
      for (const auto& s : windowize(records, config.window_len)) {
        const bool has_previous = std::exchange(seen[s.vehicle_id], true);
        for (const Feature f : kAllFeatures) {
          if (f == Feature::kDistance && !has_previous) continue;
          series[{s.vehicle_id, f}].push_back(feature_value(s, f));
        }
      }
    }

    const auto path = common.out / "calibration.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << "vehicle_id,feature,samples,mu0,sigma,k,h,w_normal,mean_normal,var_normal,w_abnormal,mean_abnormal,"
           "var_abnormal,fitted\n";
    for (const auto& c : result.calibrations) {
      MixtureModel model = c.mixture;
      bool fitted = false;
      if (options.fit) {
        try {
          model = em_fit(series[{c.vehicle_id, c.feature}], c.mixture,
                         EmOptions{config.em_max_iter, config.em_tol})
                      .model;
          fitted = true;
        } catch (const DegenerateDataError&) {
        }
      }
      const auto& n = model.normal();
      const auto& a = model.abnormal();
      out << c.vehicle_id << ',' << to_string(c.feature) << ',' << c.samples << ',' << format_decimal(c.cusum.mu0)
          << ',' << format_decimal(c.cusum.sigma) << ',' << format_decimal(c.cusum.k) << ','
          << format_decimal(c.cusum.h) << ',' << format_decimal(n.weight) << ',' << format_decimal(n.mean) << ','
          << format_decimal(n.variance) << ',' << format_decimal(a.weight) << ',' << format_decimal(a.mean) << ','
          << format_decimal(a.variance) << ',' << (fitted ? "true" : "false") << '\n';
    }
    manifest.output(path);
    manifest.write(common.out);
  });
}

}  // namespace bsmsentinel::cli
