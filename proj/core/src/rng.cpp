#include "bsmsentinel/rng.hpp"

#include <cmath>

namespace bsmsentinel {

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

}  // namespace bsmsentinel
