/*
 * Copyright 2026 The FogType Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fog/data.h"
#include "fog/features.h"
#include "fog/random.h"
#include "test_util.h"

namespace fog {
namespace {

using ::fog::testing::ThrowsKind;

TimeSeries Harmonized(std::uint64_t seed, Domain domain = Domain::kDefog,
                      double duration = 2.0) {
  return HarmonizeUnits(GenerateTrial(seed, domain, duration,
                                      {{EventType::kTurn, 0.5, 0.5}}, "trial"));
}

TrialMetadata Meta(Medication m = Medication::kOn) {
  return {"trial", "s1", m};
}

Subject MaleSubject() { return {"s1", 67.0, Sex::kMale, 8.0, 25.0, 35.0, 12.0}; }

TEST(TimeFrac, Endpoints) {
  EXPECT_EQ(ComputeTimeFrac(2), (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(ComputeTimeFrac(5), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(ComputeTimeFrac(1), (std::vector<double>{0.0}));
  EXPECT_TRUE(ThrowsKind([] { ComputeTimeFrac(0); }, ErrorKind::kValidation));
}

TEST(Jerk, FiniteDifferenceScaledByRate) {
  const std::vector<double> constant = {5, 5, 5};
  EXPECT_EQ(ComputeJerk(constant, 124.0), (std::vector<double>{0, 0, 0}));
  const std::vector<double> ramp = {0, 0.01, 0.02};
  const auto r = ComputeJerk(ramp, 100.0);
  EXPECT_DOUBLE_EQ(r[0], 0.0);
  EXPECT_NEAR(r[1], 1.0, 1e-12);
  EXPECT_NEAR(r[2], 1.0, 1e-12);
  const std::vector<double> spike = {0, 1, 0};
  EXPECT_EQ(ComputeJerk(spike, 100.0), (std::vector<double>{0, 100, -100}));
}

TEST(Jerk, IsLinear) {
  Rng rng(3);
  std::vector<double> a(50), b(50), sum(50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.Normal();
    b[i] = rng.Normal();
    sum[i] = a[i] + b[i];
  }
  const auto ja = ComputeJerk(a, 124.0), jb = ComputeJerk(b, 124.0),
             js = ComputeJerk(sum, 124.0);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(js[i], ja[i] + jb[i], 1e-9);
}

TEST(Magnitude, EuclideanNormDominatesComponents) {
  const std::vector<double> v = {3, 0, 1}, ml = {4, 0, 1}, ap = {0, 0, 1};
  const auto m = ComputeMagnitude(v, ml, ap);
  EXPECT_DOUBLE_EQ(m[0], 5.0);
  EXPECT_DOUBLE_EQ(m[1], 0.0);
  EXPECT_NEAR(m[2], std::sqrt(3.0), 1e-15);
  const std::vector<double> shorter = {1};
  EXPECT_TRUE(ThrowsKind([&] { ComputeMagnitude(v, shorter, ap); }, ErrorKind::kShape));

  const TimeSeries s = Harmonized(4);
  const auto mag = ComputeMagnitude(s.acc_v, s.acc_ml, s.acc_ap);
  for (std::size_t t = 0; t < s.length(); ++t) {
    EXPECT_GE(mag[t], std::abs(s.acc_v[t]));
    EXPECT_GE(mag[t], std::abs(s.acc_ml[t]));
    EXPECT_GE(mag[t], std::abs(s.acc_ap[t]));
  }
}

TEST(FeatureColumns, FixedOrdersAndWidths) {
  const std::vector<std::string> c = {"AccV",     "AccML",  "AccAP", "TimeFrac",
                                      "JerkV",    "JerkML", "JerkAP"};
  EXPECT_EQ(FeatureColumns(FeatureSetId::kA),
            (std::vector<std::string>{"AccV", "AccML", "AccAP"}));
  EXPECT_EQ(FeatureColumns(FeatureSetId::kC), c);
  const std::vector<std::size_t> widths = {3, 4, 7, 9, 9, 11};
  for (std::size_t i = 0; i < widths.size(); ++i) {
    EXPECT_EQ(FeatureColumns(kAllFeatureSets[i]).size(), widths[i]);
  }
  EXPECT_EQ(FeatureColumns(FeatureSetId::kG, 3).size(), 10u);
  auto d = FeatureColumns(FeatureSetId::kD);
  EXPECT_EQ(d[7], "AccM");
  EXPECT_EQ(d[8], "JerkM");
  auto f = FeatureColumns(FeatureSetId::kF);
  EXPECT_EQ(f[9], "Gender");
  EXPECT_EQ(f[10], "Medication");
}

TEST(BuildFeatureMatrix, ColumnsMatchDeclaredLayout) {
  const TimeSeries s = Harmonized(5);
  SubjectClusters clusters{4, {{"s1", 2}}};
  for (FeatureSetId id : kAllFeatureSets) {
    const FeatureMatrix m = BuildFeatureMatrix(s, id, Meta(), MaleSubject(), &clusters);
    EXPECT_EQ(m.columns, FeatureColumns(id, 4));
    EXPECT_EQ(m.values.cols(), m.columns.size());
    EXPECT_EQ(m.length(), s.length());
  }
}

TEST(BuildFeatureMatrix, ConstantColumnsBroadcast) {
  const TimeSeries s = Harmonized(6);
  const FeatureMatrix on = BuildFeatureMatrix(s, FeatureSetId::kF, Meta(Medication::kOn),
                                              MaleSubject());
  const FeatureMatrix off = BuildFeatureMatrix(
      s, FeatureSetId::kE, Meta(Medication::kOff),
      Subject{"s1", 60.0, Sex::kFemale, 1.0, 1.0, 1.0, 0.0});
  for (std::size_t t = 0; t < s.length(); ++t) {
    EXPECT_EQ(on.values(t, 9), 1.0);   // Gender, male
    EXPECT_EQ(on.values(t, 10), 1.0);  // Medication on
    EXPECT_EQ(off.values(t, 7), 0.0);
    EXPECT_EQ(off.values(t, 8), 0.0);
  }
}

TEST(BuildFeatureMatrix, NestedSetsSharePrefixes) {
  const TimeSeries s = Harmonized(7);
  SubjectClusters clusters{3, {{"s1", 0}}};
  auto build = [&](FeatureSetId id) {
    return BuildFeatureMatrix(s, id, Meta(), MaleSubject(), &clusters);
  };
  const FeatureMatrix b = build(FeatureSetId::kB), c = build(FeatureSetId::kC);
  for (std::size_t t = 0; t < s.length(); ++t) {
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(b.values(t, j), c.values(t, j));
  }
  for (FeatureSetId id : {FeatureSetId::kD, FeatureSetId::kE, FeatureSetId::kG}) {
    const FeatureMatrix m = build(id);
    for (std::size_t t = 0; t < s.length(); ++t) {
      for (std::size_t j = 0; j < 7; ++j) EXPECT_EQ(m.values(t, j), c.values(t, j));
    }
  }
}

TEST(BuildFeatureMatrix, ValuesMatchComponentFormulas) {
  const TimeSeries s = Harmonized(8, Domain::kTdcsfog);
  const FeatureMatrix d = BuildFeatureMatrix(s, FeatureSetId::kD, Meta(), MaleSubject());
  const auto frac = ComputeTimeFrac(s.length());
  const auto jerk_ml = ComputeJerk(s.acc_ml, 100.0);
  const auto mag = ComputeMagnitude(s.acc_v, s.acc_ml, s.acc_ap);
  const auto jerk_mag = ComputeJerk(mag, 100.0);
  for (std::size_t t = 0; t < s.length(); ++t) {
    EXPECT_EQ(d.values(t, 0), s.acc_v[t]);
    EXPECT_EQ(d.values(t, 3), frac[t]);
    EXPECT_EQ(d.values(t, 5), jerk_ml[t]);
    EXPECT_EQ(d.values(t, 7), mag[t]);
    EXPECT_EQ(d.values(t, 8), jerk_mag[t]);
  }
  // TimeFrac is non-decreasing within [0, 1].
  for (std::size_t t = 1; t < s.length(); ++t) EXPECT_LE(frac[t - 1], frac[t]);
}

TEST(BuildFeatureMatrix, OneHotClusters) {
  const TimeSeries s = Harmonized(9);
  SubjectClusters clusters{3, {{"s1", 1}}};
  const FeatureMatrix g =
      BuildFeatureMatrix(s, FeatureSetId::kG, Meta(), MaleSubject(), &clusters);
  for (std::size_t t = 0; t < s.length(); ++t) {
    EXPECT_EQ(g.values(t, 7), 0.0);
    EXPECT_EQ(g.values(t, 8), 1.0);
    EXPECT_EQ(g.values(t, 9), 0.0);
  }
}

TEST(BuildFeatureMatrix, Errors) {
  const TimeSeries s = Harmonized(10);
  EXPECT_TRUE(ThrowsKind(
      [&] { BuildFeatureMatrix(s, FeatureSetId::kG, Meta(), MaleSubject()); },
      ErrorKind::kMissingDependency));
  SubjectClusters other{2, {{"s9", 0}}};
  EXPECT_TRUE(ThrowsKind(
      [&] { BuildFeatureMatrix(s, FeatureSetId::kG, Meta(), MaleSubject(), &other); },
      ErrorKind::kIntegrity));
  Dataset d;
  d.series.push_back(s);
  d.metadata["trial"] = Meta();
  EXPECT_TRUE(ThrowsKind([&] { BuildFeatureMatrix(s, FeatureSetId::kA, d); },
                         ErrorKind::kIntegrity));
  const TimeSeries raw = GenerateTrial(1, Domain::kDefog, 1.0, {}, "trial");
  EXPECT_TRUE(ThrowsKind(
      [&] { BuildFeatureMatrix(raw, FeatureSetId::kA, Meta(), MaleSubject()); },
      ErrorKind::kValidation));
}

TEST(SummaryVector, HandComputedBlocks) {
  TimeSeries s;
  s.trial_id = "x";
  s.acc_v = {1.0, 3.0};
  s.acc_ml = {0.0, 0.0};
  s.acc_ap = {2.0, 2.0};
  const SummaryVector v = FileSummaryVector(s);
  const std::array<double, 12> expected = {2, 3, 1, 1, 0, 0, 0, 0, 2, 2, 2, 0};
  for (std::size_t i = 0; i < 12; ++i) EXPECT_DOUBLE_EQ(v.values[i], expected[i]) << i;
}

TEST(SummaryVector, OrderStatisticsAndChannelIndependence) {
  TimeSeries s = GenerateTrial(12, Domain::kDefog, 3.0, {});
  const SummaryVector a = FileSummaryVector(s);
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_LE(a.values[4 * c + 2], a.values[4 * c]);
    EXPECT_LE(a.values[4 * c], a.values[4 * c + 1]);
    EXPECT_GE(a.values[4 * c + 3], 0.0);
  }
  std::reverse(s.acc_ml.begin(), s.acc_ml.end());
  std::rotate(s.acc_ap.begin(), s.acc_ap.begin() + 17, s.acc_ap.end());
  const SummaryVector b = FileSummaryVector(s);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(a.values[i], b.values[i]);
}

TEST(Standardize, ZScoresOnlyEligibleColumns) {
  std::vector<FeatureMatrix> matrices;
  for (std::uint64_t seed : {1, 2, 3}) {
    matrices.push_back(BuildFeatureMatrix(Harmonized(seed), FeatureSetId::kF, Meta(),
                                          MaleSubject()));
  }
  const ColumnStats stats = FitColumnStats(matrices);
  std::vector<FeatureMatrix> standardized;
  for (const auto& m : matrices) standardized.push_back(Standardize(m, stats));
  for (std::size_t j = 0; j < stats.columns.size(); ++j) {
    double sum = 0.0, sq = 0.0, n = 0.0;
    for (const auto& m : standardized) {
      for (std::size_t t = 0; t < m.length(); ++t) {
        sum += m.values(t, j);
        sq += m.values(t, j) * m.values(t, j);
        n += 1.0;
      }
    }
    const double mean = sum / n;
    if (IsStandardizedColumn(stats.columns[j])) {
      EXPECT_NEAR(mean, 0.0, 1e-9) << stats.columns[j];
      EXPECT_NEAR(sq / n - mean * mean, 1.0, 1e-9) << stats.columns[j];
    } else {
      for (std::size_t i = 0; i < matrices.size(); ++i) {
        for (std::size_t t = 0; t < matrices[i].length(); ++t) {
          EXPECT_EQ(standardized[i].values(t, j), matrices[i].values(t, j));
        }
      }
    }
  }
}

TEST(Standardize, ConstantColumnPassesThrough) {
  FeatureMatrix m;
  m.trial_id = "c";
  m.set_id = FeatureSetId::kA;
  m.columns = FeatureColumns(FeatureSetId::kA);
  m.values = Tensor(4, 3, 2.5);
  const std::vector<FeatureMatrix> one = {m};
  const FeatureMatrix out = Standardize(m, FitColumnStats(one));
  EXPECT_EQ(out.values, m.values);
}

TEST(Fingerprint, SensitiveToSetAndOrder) {
  const auto c = FeatureColumns(FeatureSetId::kC);
  auto swapped = c;
  std::swap(swapped[0], swapped[1]);
  EXPECT_EQ(FeatureFingerprint(FeatureSetId::kC, c),
            FeatureFingerprint(FeatureSetId::kC, c));
  EXPECT_NE(FeatureFingerprint(FeatureSetId::kC, c),
            FeatureFingerprint(FeatureSetId::kC, swapped));
  EXPECT_NE(FeatureFingerprint(FeatureSetId::kC, c),
            FeatureFingerprint(FeatureSetId::kG, c));
}

}  // namespace
}  // namespace fog
