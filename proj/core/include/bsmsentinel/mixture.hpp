#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "bsmsentinel/detection.hpp"

namespace bsmsentinel {

inline constexpr double kVarianceFloor = 1e-9;
inline constexpr double kDefaultEmThreshold = 0.001;

struct MixtureComponent {
  double weight = 0.5;
  double mean = 0.0;
  double variance = 1.0;

  friend bool operator==(const MixtureComponent&, const MixtureComponent&) = default;
};

/// Two-component univariate Gaussian mixture. Component 0 models normal
/// traffic, component 1 the attack regime.
struct MixtureModel {
  std::array<MixtureComponent, 2> components{};

  const MixtureComponent& normal() const noexcept { return components[0]; }
  const MixtureComponent& abnormal() const noexcept { return components[1]; }

  friend bool operator==(const MixtureModel&, const MixtureModel&) = default;
};

/// Throws ContractError on weights outside [0,1] or not summing to one,
/// variances below the floor, or non-finite parameters.
void validate(const MixtureModel& model);

/// Starting model built from in-control statistics: the normal component takes
/// the calibration mean and variance (floored); the abnormal one sits
/// `offset_sigmas` standard deviations above it with `variance_scale` times the
/// variance and weight `abnormal_weight`.
MixtureModel em_initial_model(double mean, double variance, double offset_sigmas = 5.0,
                              double variance_scale = 10.0, double abnormal_weight = 0.01);

struct EmOptions {
  std::size_t max_iter = 200;
  double tol = 1e-8;  // stop when the log-likelihood gain drops below this
};

struct EmFit {
  MixtureModel model;
  std::vector<double> log_likelihood;  // entry 0 is the initial model
  std::size_t iterations = 0;
  bool converged = false;
};

/// Maximum-likelihood fit by expectation-maximisation, started from `init`.
/// After fitting, whichever component mean lies nearer init.normal().mean is
/// relabelled as component 0 (ties keep the lower index).
///
/// Throws InputError on non-finite samples and DegenerateDataError when fewer
/// than two distinct values are present.
EmFit em_fit(std::span<const double> samples, const MixtureModel& init,
             const EmOptions& options = {});

double log_likelihood(const MixtureModel& model, std::span<const double> samples);

/// Posterior membership of each component, computed in log space.
std::array<double, 2> responsibilities(const MixtureModel& model, double y);

/// P(abnormal | y). Never NaN; throws InputError on non-finite y.
double em_posterior(const MixtureModel& model, double y);

/// D iff em_posterior(model, y) > threshold; threshold must lie in (0, 1).
Decision em_detect_step(const MixtureModel& model, double y,
                        double threshold = kDefaultEmThreshold);

}  // namespace bsmsentinel
