#include "bsmsentinel/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "bsmsentinel/errors.hpp"

namespace bsmsentinel {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_weighted_density(const MixtureComponent& c, double y) noexcept {
  if (c.weight <= 0.0) return kNegInf;
  const double d = y - c.mean;
  return std::log(c.weight) - 0.5 * (std::log(2.0 * std::numbers::pi * c.variance) + d * d / c.variance);
}

struct LogTerms {
  double l0, l1, lse;
};

LogTerms log_terms(const MixtureModel& m, double y) noexcept {
  const double l0 = log_weighted_density(m.components[0], y);
  const double l1 = log_weighted_density(m.components[1], y);
  const double top = std::max(l0, l1);
  return {l0, l1, top + std::log(std::exp(l0 - top) + std::exp(l1 - top))};
}

void check_finite(std::span<const double> samples, const char* who) {
  for (const double s : samples) {
    if (!std::isfinite(s)) throw InputError(std::string(who) + ": non-finite sample");
  }
}

}  // namespace

void validate(const MixtureModel& model) {
  double total = 0.0;
  for (const auto& c : model.components) {
    if (!std::isfinite(c.weight) || !std::isfinite(c.mean) || !std::isfinite(c.variance)) {
      throw ContractError("mixture parameters must be finite");
    }
    if (c.weight < 0.0 || c.weight > 1.0) throw ContractError("mixture weight outside [0, 1]");
    if (c.variance < kVarianceFloor) throw ContractError("mixture variance below floor");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ContractError("mixture weights do not sum to 1");
}

MixtureModel em_initial_model(double mean, double variance, double offset_sigmas,
                              double variance_scale, double abnormal_weight) {
  const double var0 = std::max(variance, kVarianceFloor);
  const double sd = std::sqrt(var0);
  MixtureModel m;
  m.components[0] = {1.0 - abnormal_weight, mean, var0};
  m.components[1] = {abnormal_weight, mean + offset_sigmas * sd, std::max(variance_scale * var0, kVarianceFloor)};
  validate(m);
  return m;
}

double log_likelihood(const MixtureModel& model, std::span<const double> samples) {
  double ll = 0.0;
  for (const double y : samples) ll += log_terms(model, y).lse;
  return ll;
}

std::array<double, 2> responsibilities(const MixtureModel& model, double y) {
  if (!std::isfinite(y)) throw InputError("mixture: non-finite observation");
  const double l0 = log_weighted_density(model.components[0], y);
  const double l1 = log_weighted_density(model.components[1], y);
  // Logistic form of Bayes rule: monotone in l1 - l0 and free of overflow.
  return {1.0 / (1.0 + std::exp(l1 - l0)), 1.0 / (1.0 + std::exp(l0 - l1))};
}

double em_posterior(const MixtureModel& model, double y) { return responsibilities(model, y)[1]; }

Decision em_detect_step(const MixtureModel& model, double y, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ContractError("EM threshold must lie in (0, 1)");
  }
  return em_posterior(model, y) > threshold ? Decision::kDetection : Decision::kNoDetection;
}

EmFit em_fit(std::span<const double> samples, const MixtureModel& init, const EmOptions& options) {
  check_finite(samples, "em_fit");
  if (samples.size() < 2) throw DegenerateDataError("em_fit: need at least 2 samples");
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  if (*lo == *hi) throw DegenerateDataError("em_fit: all samples identical");
  validate(init);

  const double n = static_cast<double>(samples.size());
  std::vector<double> r0(samples.size()), r1(samples.size());

  EmFit fit;
  fit.model = init;
  fit.log_likelihood.push_back(log_likelihood(fit.model, samples));

  for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
    // E-step
    double n0 = 0.0, n1 = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto t = log_terms(fit.model, samples[i]);
      r0[i] = std::exp(t.l0 - t.lse);
      r1[i] = std::exp(t.l1 - t.lse);
      n0 += r0[i];
      n1 += r1[i];
    }

    // M-step
    MixtureModel next = fit.model;
    const std::array<double, 2> mass = {n0, n1};
    for (std::size_t j = 0; j < 2; ++j) {
      const auto& r = j == 0 ? r0 : r1;
      auto& c = next.components[j];
      c.weight = mass[j] / (n0 + n1);
      if (mass[j] <= 1e-12 * n) continue;  // empty component keeps its shape
      double sum = 0.0;
      for (std::size_t i = 0; i < samples.size(); ++i) {
        sum += r[i] * samples[i];
      }
      c.mean = sum / mass[j];
      double ss = 0.0;
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const double d = samples[i] - c.mean;
        ss += r[i] * d * d;
      }
      c.variance = std::max(ss / mass[j], kVarianceFloor);
    }

    const double ll = log_likelihood(next, samples);
    const double gain = ll - fit.log_likelihood.back();
    fit.model = next;
    fit.log_likelihood.push_back(ll);
    fit.iterations = iter + 1;
    if (gain < options.tol) {
      fit.converged = true;
      break;
    }
  }

  const double ref = init.normal().mean;
  auto& comps = fit.model.components;
  if (std::abs(comps[1].mean - ref) < std::abs(comps[0].mean - ref)) std::swap(comps[0], comps[1]);
  return fit;
}

}  // namespace bsmsentinel
