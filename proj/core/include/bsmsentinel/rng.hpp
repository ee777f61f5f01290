#pragma once

#include <cstdint>
#include <random>

namespace bsmsentinel {

/// Seeded generator shared by trace generation and attack injection.
///
/// Built on mt19937_64, whose output sequence is fixed by the standard; the
/// variate transforms below are written out here rather than taken from
/// <random> distributions, which differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi);
  /// Exponential inter-arrival time with the given rate (events per unit).
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
};

}  // namespace bsmsentinel
