#include <gtest/gtest.h>

#include "bsmsentinel/errors.hpp"
#include "bsmsentinel/geo.hpp"
#include "oracles.hpp"

using namespace bsmsentinel;

namespace {

BsmRecord at(double lat, double lon, VehicleId id = 1) {
  BsmRecord r;
  r.vehicle_id = id;
  r.latitude = lat;
  r.longitude = lon;
  return r;
}

}  // namespace

TEST(Geo, IdenticalCoordinatesGiveZero) {
  EXPECT_EQ(position_delta(at(34.68, -82.85), at(34.68, -82.85)), 0.0);
}

TEST(Geo, SmallLongitudeStepMatchesChordOracle) {
  const double d = position_delta(at(34.68, -82.85), at(34.68, -82.85 + 1e-5));
  const double chord = oracle::chord_distance_m(34.68, -82.85, 34.68, -82.85 + 1e-5);
  EXPECT_NEAR(d, 0.914404632820777, 0.914404632820777 * 1e-6);
  EXPECT_NEAR(d, chord, chord * 1e-6);
}

TEST(Geo, FalsePositionJumpIsTensOfKilometres) {
  const double d = position_delta(at(34.16, -82.04, 3), at(34.30, -82.81, 3));
  EXPECT_NEAR(d, 72480.8914700611, 72480.8914700611 * 1e-9);
  EXPECT_NEAR(d, oracle::law_of_cosines_m(34.16, -82.04, 34.30, -82.81), d * 1e-6);
  EXPECT_GT(d, 15.65 * 0.1 * 1000.0);
}

TEST(Geo, AnchorToPerturbedFix) {
  EXPECT_NEAR(geo::haversine_m(34.68, -82.85, 34.16, -82.04), 94146.0338578279, 94146.0338578279 * 1e-9);
}

TEST(Geo, MismatchedVehicleIdsRejected) {
  EXPECT_THROW(position_delta(at(0, 0, 1), at(0, 0, 2)), ContractError);
}

TEST(GeoProperty, SymmetricAndTriangleInequality) {
  oracle::Gen gen(7);
  for (int i = 0; i < 2000; ++i) {
    const double la[3] = {gen.uniform(-80, 80), gen.uniform(-80, 80), gen.uniform(-80, 80)};
    const double lo[3] = {gen.uniform(-179, 179), gen.uniform(-179, 179), gen.uniform(-179, 179)};
    const double ab = geo::haversine_m(la[0], lo[0], la[1], lo[1]);
    const double ba = geo::haversine_m(la[1], lo[1], la[0], lo[0]);
    const double bc = geo::haversine_m(la[1], lo[1], la[2], lo[2]);
    const double ac = geo::haversine_m(la[0], lo[0], la[2], lo[2]);
    ASSERT_EQ(ab, ba);
    ASSERT_LE(ac, (ab + bc) * (1.0 + 1e-9));
    ASSERT_NEAR(ab, oracle::chord_distance_m(la[0], lo[0], la[1], lo[1]), std::max(ab, 1.0) * 1e-9);
  }
}

TEST(GeoProperty, LocalScaleMatchesHaversine) {
  const double north = geo::haversine_m(34.68, -82.85, 34.681, -82.85);
  EXPECT_NEAR(north, 0.001 * geo::meters_per_degree_lat(), 1e-6);
  const double east = geo::haversine_m(34.68, -82.85, 34.68, -82.849);
  EXPECT_NEAR(east, 0.001 * geo::meters_per_degree_lon(34.68), 1e-4);
}
