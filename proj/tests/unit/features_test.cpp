#include <gtest/gtest.h>

#include <map>

#include "bsmsentinel/errors.hpp"
#include "bsmsentinel/features.hpp"
#include "bsmsentinel/geo.hpp"
#include "oracles.hpp"

using namespace bsmsentinel;

namespace {

BsmRecord rec(double t, VehicleId id, double lat = 34.68, double lon = -82.85) {
  BsmRecord r;
  r.timestamp = t;
  r.vehicle_id = id;
  r.latitude = lat;
  r.longitude = lon;
  return r;
}

}  // namespace

TEST(WindowIndex, DecimalTimestampsLandInTheirWindow) {
  EXPECT_EQ(window_index(0.0, 0.1), 0);
  EXPECT_EQ(window_index(0.3, 0.1), 3);
  EXPECT_EQ(window_index(5.1, 0.1), 51);
  EXPECT_EQ(window_index(0.0999, 0.1), 0);
  EXPECT_EQ(window_index(199.9, 0.1), 1999);
}

TEST(Windowize, OneMessagePerWindow) {
  std::vector<BsmRecord> records;
  for (int i = 0; i < 10; ++i) records.push_back(rec(i * 0.1, 1));
  const auto samples = windowize(records);
  ASSERT_EQ(samples.size(), 10u);
  for (const auto& s : samples) {
    EXPECT_EQ(s.mvt, 1);
    EXPECT_DOUBLE_EQ(s.mvs, 10.0);
  }
  EXPECT_EQ(samples.front().displacement, 0.0);
}

TEST(Windowize, DuplicatedIdCountsTwo) {
  const std::vector<BsmRecord> records = {rec(1.3, 2), rec(1.4, 2), rec(1.4, 2, 34.681), rec(1.5, 2)};
  const auto samples = windowize(records);
  ASSERT_EQ(samples.size(), 3u);
  EXPECT_EQ(samples[0].mvt, 1);
  EXPECT_EQ(samples[1].mvt, 2);
  EXPECT_DOUBLE_EQ(samples[1].window_start, 1.4);
  EXPECT_EQ(samples[2].mvt, 1);
}

TEST(Windowize, DisplacementUsesLastFixOfEachWindow) {
  const std::vector<BsmRecord> records = {rec(0.0, 1, 34.68), rec(0.1, 1, 34.6801), rec(0.15, 1, 34.6802)};
  const auto samples = windowize(records);
  ASSERT_EQ(samples.size(), 2u);
  EXPECT_DOUBLE_EQ(samples[1].displacement, geo::haversine_m(34.68, -82.85, 34.6802, -82.85));
}

TEST(Windowize, AbsentVehicleEmitsNoSample) {
  const std::vector<BsmRecord> records = {rec(0.0, 1), rec(0.0, 2), rec(0.1, 1), rec(0.2, 1), rec(0.2, 2)};
  const auto samples = windowize(records);
  ASSERT_EQ(samples.size(), 5u);
  EXPECT_EQ(samples[0].vehicle_id, 1);
  EXPECT_EQ(samples[1].vehicle_id, 2);
  EXPECT_EQ(samples[2].vehicle_id, 1);
  EXPECT_EQ(samples[2].window_index, 1);
  EXPECT_EQ(samples[3].window_index, 2);
  EXPECT_EQ(samples[4].vehicle_id, 2);
  EXPECT_EQ(samples[4].window_index, 2);
}

TEST(Windowize, EmptyInput) { EXPECT_TRUE(windowize({}).empty()); }

TEST(Windowize, UnsortedInputRejected) {
  const std::vector<BsmRecord> records = {rec(0.5, 1), rec(0.1, 1)};
  EXPECT_THROW(windowize(records), ContractError);
}

TEST(Windowize, NonPositiveWindowRejected) { EXPECT_THROW(Windowizer(0.0), ContractError); }

TEST(WindowizeProperty, MessagesAreConserved) {
  oracle::Gen gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BsmRecord> records;
    std::map<VehicleId, std::int64_t> sent;
    double t = 0.0;
    for (int i = 0, n = gen.integer(0, 500); i < n; ++i) {
      t += gen.integer(0, 2) * 0.05;
      const VehicleId id = gen.integer(1, 6);
      records.push_back(rec(t, id, gen.uniform(34, 35), gen.uniform(-83, -82)));
      ++sent[id];
    }
    std::map<VehicleId, std::int64_t> counted;
    for (const auto& s : windowize(records)) {
      ASSERT_GE(s.mvt, 1);
      ASSERT_DOUBLE_EQ(s.mvs, s.mvt / s.window_len);
      ASSERT_GE(s.displacement, 0.0);
      counted[s.vehicle_id] += s.mvt;
    }
    ASSERT_EQ(counted, sent);
  }
}

TEST(WindowizeProperty, PermutationWithinWindowKeepsCounts) {
  oracle::Gen gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BsmRecord> records;
    for (int w = 0; w < 20; ++w) {
      for (int i = 0, n = gen.integer(1, 6); i < n; ++i) records.push_back(rec(w * 0.1, gen.integer(1, 4)));
    }
    auto shuffled = records;
    for (std::size_t i = 0; i < shuffled.size(); ++i) {
      const std::size_t j = i + gen.next() % (shuffled.size() - i);
      if (window_index(shuffled[i].timestamp, 0.1) == window_index(shuffled[j].timestamp, 0.1)) {
        std::swap(shuffled[i], shuffled[j]);
      }
    }
    const auto a = windowize(records), b = windowize(shuffled);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSERT_EQ(a[i].vehicle_id, b[i].vehicle_id);
      ASSERT_EQ(a[i].window_index, b[i].window_index);
      ASSERT_EQ(a[i].mvt, b[i].mvt);
    }
  }
}
