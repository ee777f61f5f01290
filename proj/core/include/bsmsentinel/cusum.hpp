#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "bsmsentinel/detection.hpp"

namespace bsmsentinel {

/// Smallest in-control standard deviation; keeps the n-sigma rule meaningful
/// on streams that are exactly constant.
inline constexpr double kSigmaFloor = 1e-6;

/// Tabular CUSUM parameters, all in feature units.
struct CusumParams {
  double mu0 = 0.0;    // in-control target mean
  double sigma = 1.0;  // in-control standard deviation
  double k = 0.5;      // slack (reference value)
  double h = 5.0;      // decision threshold
  bool one_sided = false;       // hold C- at zero
  bool reset_on_detect = true;  // zero both sums after a detection
};

/// Throws ContractError unless sigma >= kSigmaFloor, h > 0, k >= 0 and all finite.
void validate(const CusumParams& params);

struct CusumState {
  double c_plus = 0.0;
  double c_minus = 0.0;
  std::uint64_t n_since_reset = 0;

  friend bool operator==(const CusumState&, const CusumState&) = default;
};

struct CusumStep {
  CusumState state;      // after any reset
  double c_plus = 0.0;   // accumulators before the reset
  double c_minus = 0.0;
  Decision decision = Decision::kNoDetection;
  double score = 0.0;    // max(c_plus, c_minus) / h

  bool detected() const noexcept { return decision == Decision::kDetection; }
};

/// One step of the two-sided recurrence
///   C+ = max(0, y - (mu0 + k) + C+),  C- = max(0, (mu0 - k) - y + C-)
/// with a detection when either exceeds h. Throws InputError on non-finite y.
CusumStep cusum_step(const CusumState& state, const CusumParams& params, double y);

/// Slack as a multiple of sigma. Half a sigma tunes for one-sigma shifts;
/// zero reproduces raw accumulated deviations.
struct KRule {
  double sigma_multiple = 0.5;

  static constexpr KRule half_sigma() noexcept { return {0.5}; }
  static constexpr KRule zero() noexcept { return {0.0}; }
};

/// Accepts "half_sigma", "zero", or a non-negative number of sigmas.
KRule parse_k_rule(std::string_view text);

/// Estimates mu0 and sigma from in-control samples; h = n_sigma * sigma.
/// Throws CalibrationError with fewer than two samples.
CusumParams cusum_calibrate(std::span<const double> samples, double n_sigma = 5.0,
                            KRule k_rule = KRule::half_sigma());

/// Owns the running state of one monitored stream.
class CusumDetector {
 public:
  explicit CusumDetector(const CusumParams& params);

  CusumStep update(double y);
  void reset() noexcept { state_ = {}; }

  const CusumParams& params() const noexcept { return params_; }
  const CusumState& state() const noexcept { return state_; }

 private:
  CusumParams params_;
  CusumState state_;
};

}  // namespace bsmsentinel
