#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "bsmsentinel/bsm.hpp"

namespace bsmsentinel {

inline constexpr double kDefaultWindowLen = 0.1;

/// Index k of the half-open window [k*w, (k+1)*w) holding timestamp t.
/// A small tolerance absorbs decimal round-off, so 0.3 lands in window 3.
std::int64_t window_index(double timestamp, double window_len) noexcept;

/// Streaming aggregation of time-ordered BSMs into per-vehicle window samples.
///
/// Samples of one window are released once a record from a later window
/// arrives (or on flush), ordered by vehicle id. A vehicle that sends nothing
/// in a window produces no sample for it.
class Windowizer {
 public:
  explicit Windowizer(double window_len = kDefaultWindowLen);

  void push(const BsmRecord& record, std::vector<FeatureSample>& out);
  void flush(std::vector<FeatureSample>& out);

  double window_len() const noexcept { return window_len_; }

 private:
  struct Pending {
    std::int64_t count = 0;
    BsmRecord last;
  };

  void emit(std::vector<FeatureSample>& out);

  double window_len_;
  std::int64_t current_ = 0;
  bool open_ = false;
  std::map<VehicleId, Pending> pending_;
  std::map<VehicleId, BsmRecord> last_seen_;
};

std::vector<FeatureSample> windowize(std::span<const BsmRecord> records,
                                     double window_len = kDefaultWindowLen);

}  // namespace bsmsentinel
