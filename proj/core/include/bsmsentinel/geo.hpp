#pragma once

#include "bsmsentinel/bsm.hpp"

namespace bsmsentinel::geo {

/// Mean radius of the WGS-84 ellipsoid, meters.
inline constexpr double kEarthRadiusM = 6371008.8;

/// Haversine great-circle distance in meters between two lat/lon pairs (degrees).
double haversine_m(double lat1, double lon1, double lat2, double lon2) noexcept;

/// Metres of northing per degree of latitude on the mean sphere.
double meters_per_degree_lat() noexcept;

/// Metres of easting per degree of longitude at the given latitude.
double meters_per_degree_lon(double lat_deg) noexcept;

}  // namespace bsmsentinel::geo

namespace bsmsentinel {

/// Distance travelled between two reports of the same vehicle.
/// Throws ContractError when the vehicle ids differ.
double position_delta(const BsmRecord& prev, const BsmRecord& curr);

}  // namespace bsmsentinel
