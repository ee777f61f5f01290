#include <gtest/gtest.h>

#include <algorithm>

#include "bsmsentinel/errors.hpp"
#include "bsmsentinel/metrics.hpp"
#include "oracles.hpp"

using namespace bsmsentinel;

namespace {

// One record per window for vehicle 1 over windows [0, n); `attacked` windows
// are labelled DOS.
std::vector<LabelRow> labels_for(int n, const std::vector<int>& attacked) {
  std::vector<LabelRow> rows;
  for (int w = 0; w < n; ++w) {
    const bool a = std::find(attacked.begin(), attacked.end(), w) != attacked.end();
    rows.push_back({w * 0.1, 1, a ? AttackKind::kDos : AttackKind::kNone});
  }
  return rows;
}

std::vector<Detection> decisions_for(int n, const std::vector<int>& flagged) {
  std::vector<Detection> out;
  for (int w = 0; w < n; ++w) {
    const bool d = std::find(flagged.begin(), flagged.end(), w) != flagged.end();
    out.push_back({1, w * 0.1, Feature::kMvs, Detector::kCusum, d ? Decision::kDetection : Decision::kNoDetection,
                   d ? 2.0 : 0.0});
  }
  return out;
}

}  // namespace

TEST(Score, AllNormalAllQuiet) {
  const auto report = score(decisions_for(10, {}), labels_for(10, {}), 0.1);
  ASSERT_EQ(report.groups.size(), 1u);
  const auto& g = report.groups[0];
  EXPECT_EQ(g.kind, AttackKind::kNone);
  EXPECT_EQ(g.accuracy, 1.0);
  EXPECT_EQ(g.false_positive_rate, 0.0);
  EXPECT_FALSE(g.latency_seconds.has_value());
  EXPECT_EQ(g.tn, 10u);
}

TEST(Score, DetectionsEqualToLabels) {
  const auto report = score(decisions_for(10, {3, 4, 5}), labels_for(10, {3, 4, 5}), 0.1);
  const auto* g = report.find(AttackKind::kDos, Detector::kCusum, Feature::kMvs);
  ASSERT_NE(g, nullptr);
  EXPECT_EQ(g->accuracy, 1.0);
  EXPECT_EQ(g->latency_windows, 0);
  EXPECT_EQ(g->latency_seconds, 0.0);
  EXPECT_EQ(g->episodes, 1u);
  EXPECT_EQ(g->episodes_detected, 1u);
}

TEST(Score, HandCountedConfusionMatrix) {
  const auto report = score(decisions_for(10, {4, 5, 8}), labels_for(10, {3, 4, 5}), 0.1);
  const auto* g = report.find(AttackKind::kDos, Detector::kCusum, Feature::kMvs);
  ASSERT_NE(g, nullptr);
  EXPECT_EQ(g->tp, 2u);
  EXPECT_EQ(g->fn, 1u);
  EXPECT_EQ(g->fp, 1u);
  EXPECT_EQ(g->tn, 6u);
  EXPECT_DOUBLE_EQ(g->accuracy, 0.8);
  EXPECT_DOUBLE_EQ(g->false_positive_rate, 1.0 / 7.0);
  EXPECT_DOUBLE_EQ(g->false_negative_rate, 1.0 / 3.0);
  EXPECT_EQ(g->latency_windows, 1);
  EXPECT_NEAR(*g->latency_seconds, 0.1, 1e-12);
}

TEST(Score, UndetectedEpisodeHasNoLatency) {
  const auto report = score(decisions_for(10, {8}), labels_for(10, {3, 4, 5}), 0.1);
  const auto* g = report.find(AttackKind::kDos, Detector::kCusum, Feature::kMvs);
  EXPECT_EQ(g->episodes_detected, 0u);
  EXPECT_FALSE(g->latency_windows.has_value());
}

TEST(Score, OtherKindsExcludedFromGroup) {
  auto labels = labels_for(10, {3});
  labels[7].kind = AttackKind::kFalseInfo;
  const auto report = score(decisions_for(10, {3, 7}), labels, 0.1);
  const auto* dos = report.find(AttackKind::kDos, Detector::kCusum, Feature::kMvs);
  const auto* fls = report.find(AttackKind::kFalseInfo, Detector::kCusum, Feature::kMvs);
  ASSERT_NE(dos, nullptr);
  ASSERT_NE(fls, nullptr);
  EXPECT_EQ(dos->total(), 9u);
  EXPECT_EQ(dos->fp, 0u);
  EXPECT_EQ(fls->total(), 9u);
  EXPECT_EQ(fls->tp, 1u);
}

TEST(Score, MismatchedTracesRejected) {
  auto detections = decisions_for(10, {});
  detections.push_back({2, 0.0, Feature::kMvs, Detector::kCusum, Decision::kNoDetection, 0.0});
  EXPECT_THROW(score(detections, labels_for(10, {}), 0.1), ContractError);
  EXPECT_THROW(score(decisions_for(9, {}), labels_for(10, {}), 0.1), ContractError);
  EXPECT_THROW(score(decisions_for(10, {}), labels_for(10, {}), 0.0), ContractError);
}

TEST(Score, JsonOmitsTimingOnRequest) {
  auto report = score(decisions_for(10, {}), labels_for(10, {}), 0.1);
  report.throughput = 5.0;
  EXPECT_NE(metrics_json(report).find("timing"), std::string::npos);
  EXPECT_EQ(metrics_json(report, false).find("timing"), std::string::npos);
}

TEST(ScoreProperty, PermutationInvariantAndAccuracyIdentity) {
  oracle::Gen gen(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen.integer(1, 60);
    std::vector<int> attacked, flagged;
    for (int w = 0; w < n; ++w) {
      if (gen.integer(0, 3) == 0) attacked.push_back(w);
      if (gen.integer(0, 3) == 0) flagged.push_back(w);
    }
    auto detections = decisions_for(n, flagged);
    const auto labels = labels_for(n, attacked);
    const auto a = metrics_json(score(detections, labels, 0.1));
    for (std::size_t i = detections.size(); i > 1; --i) std::swap(detections[i - 1], detections[gen.next() % i]);
    const auto report = score(detections, labels, 0.1);
    ASSERT_EQ(metrics_json(report), a);
    for (const auto& g : report.groups) {
      const double err = static_cast<double>(g.fp + g.fn) / static_cast<double>(g.total());
      ASSERT_EQ(g.accuracy + err, 1.0);
      ASSERT_GE(g.accuracy, 0.0);
      ASSERT_LE(g.accuracy, 1.0);
    }
  }
}
