// bsmsentinel: simulate BSM traces, detect attacks, and score the detections.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace cli = bsmsentinel::cli;

int main(int argc, char** argv) {
  CLI::App app{"Change-point attack detection for connected-vehicle BSM traces"};
  app.require_subcommand(1);

  cli::CommonOptions common;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string format = "both";

  auto add_common = [&](CLI::App* sub, bool with_seed, bool with_format) {
    sub->add_option("--config", config_path, "Key-value config file");
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    if (with_seed) sub->add_option("--seed", seed, "Generator seed (overrides config and BSMSENTINEL_SEED)");
    if (with_format) {
      sub->add_option("--format", format, "Metrics output: table, machine or both")
          ->check(CLI::IsMember({"table", "machine", "both"}))
          ->capture_default_str();
    }
  };

  auto* simulate = app.add_subcommand("simulate", "Generate a labelled trace from a scenario config");
  add_common(simulate, true, false);

  cli::DetectOptions detect;
  std::string detect_trace, detect_labels;
  auto* detect_cmd = app.add_subcommand("detect", "Run CUSUM and EM over a trace");
  detect_cmd->add_option("trace", detect_trace, "Trace CSV")->required();
  detect_cmd->add_option("--labels", detect_labels, "Labels CSV, checked against calibration intervals");
  add_common(detect_cmd, false, false);

  cli::EvaluateOptions evaluate;
  std::string eval_detections, eval_labels;
  double window = 0.0;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score detections against labels");
  evaluate_cmd->add_option("detections", eval_detections, "Detections CSV")->required();
  evaluate_cmd->add_option("labels", eval_labels, "Labels CSV")->required();
  evaluate_cmd->add_option("--window", window, "Matching window in seconds (default from config)");
  add_common(evaluate_cmd, false, true);

  cli::CalibrateOptions calibrate;
  std::string calibrate_trace;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Report per-stream calibration parameters");
  calibrate_cmd->add_option("trace", calibrate_trace, "Trace CSV")->required();
  calibrate_cmd->add_flag("--fit", calibrate.fit, "Also fit the mixture to each full stream");
  add_common(calibrate_cmd, false, false);

  CLI11_PARSE(app, argc, argv);

  if (!config_path.empty()) common.config = config_path;
  common.out = out_dir;
  static const std::map<std::string, cli::MetricsFormat> formats = {
      {"both", cli::MetricsFormat::kBoth}, {"table", cli::MetricsFormat::kTable},
      {"machine", cli::MetricsFormat::kMachine}};
  common.format = formats.at(format);

  if (simulate->parsed()) {
    if (simulate->count("--seed") > 0) common.seed = seed;
    return cli::cmd_simulate(common, std::cerr);
  }
  if (detect_cmd->parsed()) {
    detect.trace = detect_trace;
    if (!detect_labels.empty()) detect.labels = detect_labels;
    return cli::cmd_detect(common, detect, std::cerr);
  }
  if (evaluate_cmd->parsed()) {
    evaluate.detections = eval_detections;
    evaluate.labels = eval_labels;
    if (evaluate_cmd->count("--window") > 0) evaluate.window = window;
    return cli::cmd_evaluate(common, evaluate, std::cerr);
  }
  calibrate.trace = calibrate_trace;
  return cli::cmd_calibrate(common, calibrate, std::cerr);
}
