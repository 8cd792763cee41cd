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

#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fog/pseudolabel.h"
#include "fog/random.h"
#include "pseudo_oracle.h"
#include "test_util.h"

namespace fog {
namespace {

using ::fog::testing::ArgmaxOneHot;
using ::fog::testing::TempDir;
using ::fog::testing::ThrowsKind;

TimeSeries Notype(std::uint64_t seed, const std::string& id, double duration = 3.0) {
  return GenerateTrial(seed, Domain::kNotype, duration,
                       {{EventType::kTurn, 0.5, 1.2}}, id);
}

Tensor RandomProbabilities(std::size_t rows, Rng& rng) {
  Tensor p(rows, 3);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = rng.Uniform();
  return p;
}

TEST(AssignPseudoLabels, StatedExamples) {
  TimeSeries s = Notype(1, "n");
  s.event.assign(s.length(), 0);
  s.event[0] = s.event[1] = 1;
  Tensor p(s.length(), 3, 0.9);
  p(0, 0) = 0.2, p(0, 1) = 0.5, p(0, 2) = 0.3;
  p(1, 0) = 0.4, p(1, 1) = 0.4, p(1, 2) = 0.2;
  const PseudoLabeledSeries out = AssignPseudoLabels(s, p);
  EXPECT_EQ(out.generated[0][0], 0);
  EXPECT_EQ(out.generated[1][0], 1);
  EXPECT_EQ(out.generated[2][0], 0);
  EXPECT_EQ(out.generated[0][1], 1);
  EXPECT_EQ(out.generated[1][1], 0);
  for (std::size_t t = 2; t < s.length(); ++t) {
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(out.generated[k][t], 0);
  }
}

TEST(AssignPseudoLabels, ArgmaxOracleAndMassConservation) {
  Rng rng(99);
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const TimeSeries s = Notype(trial, "n" + std::to_string(trial), 2.0);
    Tensor p = RandomProbabilities(s.length(), rng);
    // Force some exact ties.
    for (std::size_t t = 0; t < s.length(); t += 7) p(t, 2) = p(t, 1);
    const PseudoLabeledSeries out = AssignPseudoLabels(s, p);
    std::size_t events = 0, one_hot = 0;
    for (std::size_t t = 0; t < s.length(); ++t) {
      int sum = 0;
      for (std::size_t k = 0; k < 3; ++k) sum += out.generated[k][t];
      events += s.event[t];
      one_hot += sum == 1;
      if (s.event[t] == 1) {
        const auto want = ArgmaxOneHot(p(t, 0), p(t, 1), p(t, 2));
        for (std::size_t k = 0; k < 3; ++k) ASSERT_EQ(out.generated[k][t], want[k]);
      } else {
        ASSERT_EQ(sum, 0);
      }
    }
    EXPECT_EQ(events, one_hot);
    EXPECT_EQ(AssignPseudoLabels(s, p).generated, out.generated);
  }
}

TEST(AssignPseudoLabels, Errors) {
  const TimeSeries s = Notype(1, "n");
  EXPECT_TRUE(ThrowsKind([&] { AssignPseudoLabels(s, Tensor(s.length() - 1, 3)); },
                         ErrorKind::kShape));
  const TimeSeries typed = GenerateTrial(1, Domain::kDefog, 1.0, {});
  EXPECT_TRUE(ThrowsKind([&] { AssignPseudoLabels(typed, Tensor(typed.length(), 3)); },
                         ErrorKind::kValidation));
}

class AugmentTest : public ::testing::Test {
 protected:
  void SetUp() override {
    defog_.subjects["s1"] = Subject{"s1", 70, Sex::kMale, 5, 20, 30, 10};
    for (int i = 0; i < 4; ++i) {
      const std::string id = "d" + std::to_string(i);
      defog_.series.push_back(GenerateTrial(i, Domain::kDefog, 2.0, {}, id));
      defog_.metadata[id] = {id, "s1", Medication::kOn};
    }
    Rng rng(3);
    for (int i = 0; i < 2; ++i) {
      const std::string id = "n" + std::to_string(i);
      const TimeSeries s = Notype(10 + i, id);
      defog_.metadata[id] = {id, "s1", Medication::kOff};
      pseudo_.push_back(AssignPseudoLabels(s, RandomProbabilities(s.length(), rng),
                                           {"defog-C-seed0", FeatureSetId::kC, 0}));
    }
  }
  Dataset defog_;
  std::vector<PseudoLabeledSeries> pseudo_;
};

TEST_F(AugmentTest, CardinalityAndFlags) {
  const Dataset merged = BuildAugmentedDataset(defog_, pseudo_, FeatureSetId::kC);
  ASSERT_EQ(merged.series.size(), 6u);
  EXPECT_EQ(merged.pseudo, (std::vector<bool>{false, false, false, false, true, true}));
  EXPECT_EQ(merged.series[4].domain, Domain::kDefog);
  EXPECT_EQ(merged.series[4].typed_labels, pseudo_[0].generated);
}

TEST_F(AugmentTest, ProvenanceGuardAndDuplicates) {
  EXPECT_TRUE(ThrowsKind([&] { BuildAugmentedDataset(defog_, pseudo_, FeatureSetId::kB); },
                         ErrorKind::kValidation));
  auto twice = pseudo_;
  twice.push_back(pseudo_[0]);
  EXPECT_TRUE(ThrowsKind([&] { BuildAugmentedDataset(defog_, twice, FeatureSetId::kC); },
                         ErrorKind::kIntegrity));
}

TEST_F(AugmentTest, WriteAndLoadRoundTrip) {
  TempDir dir;
  for (const auto& p : pseudo_) WritePseudoLabeled(p, dir.path());
  const auto back = LoadPseudoLabeled(dir.path());
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].series.trial_id, pseudo_[i].series.trial_id);
    EXPECT_EQ(back[i].generated, pseudo_[i].generated);
    EXPECT_EQ(back[i].provenance.group_id, "defog-C-seed0");
    EXPECT_EQ(back[i].provenance.feature_set, FeatureSetId::kC);
  }
  EXPECT_TRUE(ThrowsKind([&] { LoadPseudoLabeled(dir / "missing"); }, ErrorKind::kIo));
}

}  // namespace
}  // namespace fog
