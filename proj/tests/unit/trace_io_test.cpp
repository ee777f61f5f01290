#include <gtest/gtest.h>

#include <sstream>

#include "bsmsentinel/errors.hpp"
#include "bsmsentinel/scenario.hpp"
#include "bsmsentinel/trace_io.hpp"
#include "oracles.hpp"

using namespace bsmsentinel;

namespace {

std::vector<BsmRecord> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in);
}

template <typename E>
E parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const E& e) {
    return e;
  }
  ADD_FAILURE() << "no error raised";
  throw std::logic_error("unreachable");
}

}  // namespace

TEST(ParseTrace, LongitudeBeforeLatitude) {
  const auto records = parse(
      "timestamp,vehicle_id,longitude,latitude,speed,position_delta,msg_rate\n"
      "5.10, 6, -82.84, 34.68, 0.00, 0.00, 10.12\n");
  ASSERT_EQ(records.size(), 1u);
  const auto& r = records[0];
  EXPECT_DOUBLE_EQ(r.timestamp, 5.10);
  EXPECT_EQ(r.vehicle_id, 6);
  EXPECT_DOUBLE_EQ(r.longitude, -82.84);
  EXPECT_DOUBLE_EQ(r.latitude, 34.68);
  EXPECT_DOUBLE_EQ(r.speed, 0.0);
  ASSERT_TRUE(r.msg_rate.has_value());
  EXPECT_DOUBLE_EQ(*r.msg_rate, 10.12);
}

TEST(ParseTrace, AbbreviatedHeaderAliases) {
  const auto records = parse(
      "TS, ID, Long., Lat., Speed, Pos.(m), MsgRate\n"
      "5.00, 6, -82.84, 34.68, 15.60, 1.56, 10.00\n");
  ASSERT_EQ(records.size(), 1u);
  EXPECT_DOUBLE_EQ(records[0].latitude, 34.68);
  EXPECT_DOUBLE_EQ(records[0].longitude, -82.84);
}

TEST(ParseTrace, OptionalColumnsMayBeAbsent) {
  const auto records = parse("vehicle_id,timestamp,latitude,longitude,speed\n1,0.0,34.68,-82.85,15.65\n");
  ASSERT_EQ(records.size(), 1u);
  EXPECT_FALSE(records[0].msg_rate.has_value());
}

TEST(ParseTrace, HeaderOnlyYieldsNothing) {
  EXPECT_TRUE(parse(std::string(kTraceHeader) + "\n").empty());
}

TEST(ParseTrace, MissingHeaderRejected) { EXPECT_THROW(parse(""), ParseError); }

TEST(ParseTrace, LatitudeOutOfRangeNamesField) {
  const auto e = parse_error<ValidationError>(std::string(kTraceHeader) +
                                              "\n0.0,1,34.68,-82.85,1.0,0.0,10.0\n0.1,1,95.0,-82.85,1.0,0.0,10.0\n");
  EXPECT_EQ(e.field(), "latitude");
  EXPECT_EQ(e.line(), 3u);
  EXPECT_NE(std::string(e.what()).find("latitude"), std::string::npos);
}

TEST(ParseTrace, NegativeSpeedRejected) {
  const auto e = parse_error<ValidationError>(std::string(kTraceHeader) + "\n0.0,1,34.68,-82.85,-1.0,0.0,10.0\n");
  EXPECT_EQ(e.field(), "speed");
}

TEST(ParseTrace, WrongArityCarriesLine) {
  const auto e = parse_error<ParseError>(std::string(kTraceHeader) + "\n0.0,1,34.68,-82.85,1.0,0.0,10.0\n0.1,1,34.68\n");
  EXPECT_EQ(e.line(), 3u);
}

TEST(ParseTrace, BadNumberCarriesLine) {
  const auto e = parse_error<ParseError>(std::string(kTraceHeader) + "\n0.0,1,abc,-82.85,1.0,0.0,10.0\n");
  EXPECT_EQ(e.line(), 2u);
}

TEST(ParseTrace, DecreasingTimestampIsOrderingError) {
  const auto e = parse_error<OrderingError>(std::string(kTraceHeader) +
                                            "\n0.2,1,34.68,-82.85,1.0,0.0,10.0\n0.1,2,34.68,-82.85,1.0,0.0,10.0\n");
  EXPECT_EQ(e.line(), 3u);
}

TEST(ParseTrace, CommentsAndBlankLinesSkipped) {
  const auto records = parse("# exported\n" + std::string(kTraceHeader) + "\n\n0.0,1,34.68,-82.85,1.0,0.0,10.0\n");
  EXPECT_EQ(records.size(), 1u);
}

TEST(WriteTrace, RecomputesDeltaAndRate) {
  std::vector<BsmRecord> records;
  const double longitudes[] = {-82.85, -82.84999, -82.84998};
  for (int i = 0; i < 3; ++i) {
    BsmRecord r;
    r.timestamp = i * 0.1;
    r.vehicle_id = 4;
    r.latitude = 34.68;
    r.longitude = longitudes[i];
    records.push_back(r);
  }
  std::ostringstream out;
  write_trace(out, records);
  std::istringstream lines(out.str());
  std::string header, first, second;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, second);
  EXPECT_EQ(header, kTraceHeader);
  EXPECT_EQ(first, "0.0,4,34.68,-82.85,0.0,0.000000,1.0");
  EXPECT_EQ(second, "0.1,4,34.68,-82.84999,0.0,0.914405,2.0");
}

TEST(WriteTrace, FormatDecimal) {
  EXPECT_EQ(format_decimal(5.0), "5.0");
  EXPECT_EQ(format_decimal(5.1), "5.1");
  EXPECT_EQ(format_decimal(-82.84), "-82.84");
}

TEST(TraceProperty, RoundTripIsExact) {
  oracle::Gen gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<BsmRecord> records;
    double t = 0.0;
    const int n = gen.integer(0, 200);
    for (int i = 0; i < n; ++i) {
      t += gen.integer(0, 3) * 0.1;
      BsmRecord r;
      r.timestamp = t;
      r.vehicle_id = gen.integer(1, 9);
      r.latitude = gen.uniform(-90, 90);
      r.longitude = gen.uniform(-180, 180);
      r.speed = gen.uniform(0, 40);
      if (gen.integer(0, 1)) r.msg_rate = gen.uniform(0, 20);
      records.push_back(quantize(r));
    }
    std::stringstream buf;
    write_trace(buf, records);
    auto back = parse_trace(buf);
    ASSERT_EQ(back.size(), records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      ASSERT_EQ(back[i].timestamp, records[i].timestamp);
      ASSERT_EQ(back[i].vehicle_id, records[i].vehicle_id);
      ASSERT_EQ(back[i].latitude, records[i].latitude);
      ASSERT_EQ(back[i].longitude, records[i].longitude);
      ASSERT_EQ(back[i].speed, records[i].speed);
    }
  }
}

TEST(TraceProperty, GeneratedTraceSurvivesRoundTrip) {
  ScenarioConfig config;
  config.duration = 20;
  const auto trace = simulate(config, {});
  std::stringstream buf;
  write_trace(buf, trace.records);
  const auto back = parse_trace(buf);
  ASSERT_EQ(back.size(), trace.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    ASSERT_EQ(back[i].timestamp, trace.records[i].timestamp);
    ASSERT_EQ(back[i].latitude, trace.records[i].latitude);
    ASSERT_EQ(back[i].longitude, trace.records[i].longitude);
    ASSERT_EQ(back[i].speed, trace.records[i].speed);
  }
}
