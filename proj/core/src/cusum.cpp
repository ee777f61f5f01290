#include "bsmsentinel/cusum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string>

#include "bsmsentinel/errors.hpp"

namespace bsmsentinel {

void validate(const CusumParams& p) {
  if (!std::isfinite(p.mu0) || !std::isfinite(p.sigma) || !std::isfinite(p.k) || !std::isfinite(p.h)) {
    throw ContractError("CUSUM parameters must be finite");
  }
  if (p.sigma < kSigmaFloor) throw ContractError("CUSUM sigma below floor");
  if (!(p.h > 0.0)) throw ContractError("CUSUM threshold h must be positive");
  if (p.k < 0.0) throw ContractError("CUSUM slack k must be non-negative");
}

CusumStep cusum_step(const CusumState& state, const CusumParams& params, double y) {
  if (!std::isfinite(y)) throw InputError("cusum_step: non-finite observation");

  CusumStep step;
  step.c_plus = std::max(0.0, y - (params.mu0 + params.k) + state.c_plus);
  step.c_minus = params.one_sided ? 0.0 : std::max(0.0, (params.mu0 - params.k) - y + state.c_minus);
  step.score = std::max(step.c_plus, step.c_minus) / params.h;

  const bool alarm = step.c_plus > params.h || step.c_minus > params.h;
  step.decision = alarm ? Decision::kDetection : Decision::kNoDetection;

  if (alarm && params.reset_on_detect) {
    step.state = CusumState{};
  } else {
    step.state = CusumState{step.c_plus, step.c_minus, state.n_since_reset + 1};
  }
  return step;
}

KRule parse_k_rule(std::string_view text) {
  if (text == "half_sigma") return KRule::half_sigma();
  if (text == "zero") return KRule::zero();
  double multiple = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), multiple);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(multiple) || multiple < 0.0) {
    throw ConfigError("k_rule must be 'half_sigma', 'zero' or a non-negative number, got '" +
                      std::string(text) + "'");
  }
  return KRule{multiple};
}

CusumParams cusum_calibrate(std::span<const double> samples, double n_sigma, KRule k_rule) {
  if (samples.size() < 2) {
    throw CalibrationError("CUSUM calibration needs at least 2 samples, got " + std::to_string(samples.size()));
  }
  if (!(n_sigma > 0.0)) throw CalibrationError("n_sigma must be positive");
  for (const double s : samples) {
    if (!std::isfinite(s)) throw InputError("cusum_calibrate: non-finite sample");
  }

  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (const double s : samples) ss += (s - mean) * (s - mean);
  const double stdev = std::sqrt(ss / (n - 1.0));

  CusumParams p;
  p.mu0 = mean;
  p.sigma = std::max(stdev, kSigmaFloor);
  p.h = n_sigma * p.sigma;
  p.k = k_rule.sigma_multiple * p.sigma;
  return p;
}

CusumDetector::CusumDetector(const CusumParams& params) : params_(params) { validate(params_); }

CusumStep CusumDetector::update(double y) {
  auto step = cusum_step(state_, params_, y);
  state_ = step.state;
  return step;
}

}  // namespace bsmsentinel
