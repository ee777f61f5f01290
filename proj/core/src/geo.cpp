#include "bsmsentinel/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bsmsentinel/errors.hpp"

namespace bsmsentinel::geo {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

double haversine_m(double lat1, double lon1, double lat2, double lon2) noexcept {
  const double phi1 = lat1 * kDegToRad;
  const double phi2 = lat2 * kDegToRad;
  const double sin_dphi = std::sin((phi2 - phi1) / 2.0);
  const double sin_dlambda = std::sin((lon2 - lon1) * kDegToRad / 2.0);
  const double a = sin_dphi * sin_dphi + std::cos(phi1) * std::cos(phi2) * sin_dlambda * sin_dlambda;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(a)));
}

double meters_per_degree_lat() noexcept { return kEarthRadiusM * kDegToRad; }

double meters_per_degree_lon(double lat_deg) noexcept {
  return kEarthRadiusM * kDegToRad * std::cos(lat_deg * kDegToRad);
}

}  // namespace bsmsentinel::geo

namespace bsmsentinel {

double position_delta(const BsmRecord& prev, const BsmRecord& curr) {
  if (prev.vehicle_id != curr.vehicle_id) {
    throw ContractError("position_delta: vehicle ids differ (" + std::to_string(prev.vehicle_id) +
                        " vs " + std::to_string(curr.vehicle_id) + ")");
  }
  return geo::haversine_m(prev.latitude, prev.longitude, curr.latitude, curr.longitude);
}

}  // namespace bsmsentinel
