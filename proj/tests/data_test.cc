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

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fog/csv.h"
#include "fog/data.h"
#include "fog/log.h"
#include "fog/synthetic.h"
#include "test_util.h"

namespace fog {
namespace {

using ::fog::testing::TempDir;
using ::fog::testing::ThrowsKind;

constexpr const char* kTypedHeader = "Time,AccV,AccML,AccAP,StartHesitation,Turn,Walking\n";

TEST(LoadTimeSeries, ParsesTypedLabelsAndTrialIdFromStem) {
  TempDir dir;
  csv::WriteText(dir / "02ab235146.csv", std::string(kTypedHeader) +
                                             "0,1.0,0.1,0.2,0,0,0\n"
                                             "1,1.1,0.2,0.3,0,0,0\n"
                                             "2,1.2,0.3,0.4,0,1,0\n");
  const TimeSeries s = LoadTimeSeries(dir / "02ab235146.csv", Domain::kDefog);
  EXPECT_EQ(s.trial_id, "02ab235146");
  EXPECT_EQ(s.length(), 3u);
  EXPECT_EQ(s.typed_labels[1][2], 1);
  EXPECT_EQ(s.typed_labels[0][2], 0);
  EXPECT_DOUBLE_EQ(s.acc_v[1], 1.1);
  EXPECT_DOUBLE_EQ(s.sample_rate_hz, 124.0);
  EXPECT_FALSE(s.units_harmonized);
}

TEST(LoadTimeSeries, NotypeKeepsSingleEventColumn) {
  TempDir dir;
  csv::WriteText(dir / "n1.csv",
                 "Time,AccV,AccML,AccAP,Event\n0,1,0,0,1\n1,1,0,0,0\n");
  const TimeSeries s = LoadTimeSeries(dir / "n1.csv", Domain::kNotype);
  EXPECT_EQ(s.event, (std::vector<std::uint8_t>{1, 0}));
  EXPECT_FALSE(s.has_typed_labels());
  for (const auto& column : s.typed_labels) EXPECT_TRUE(column.empty());
}

TEST(LoadTimeSeries, MissingColumnIsSchemaError) {
  TempDir dir;
  csv::WriteText(dir / "t.csv", "Time,AccV,AccML,StartHesitation,Turn,Walking\n0,1,0,0,0,0\n");
  EXPECT_TRUE(ThrowsKind([&] { LoadTimeSeries(dir / "t.csv", Domain::kDefog); },
                         ErrorKind::kSchema));
}

TEST(LoadTimeSeries, NonNumericCellNamesRow) {
  TempDir dir;
  csv::WriteText(dir / "t.csv", std::string(kTypedHeader) +
                                    "0,1,0,0,0,0,0\n1,abc,0,0,0,0,0\n");
  try {
    LoadTimeSeries(dir / "t.csv", Domain::kTdcsfog);
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos) << e.what();
  }
}

TEST(LoadTimeSeries, RaggedRowIsParseError) {
  TempDir dir;
  csv::WriteText(dir / "t.csv", std::string(kTypedHeader) + "0,1,0,0,0,0\n");
  EXPECT_TRUE(ThrowsKind([&] { LoadTimeSeries(dir / "t.csv", Domain::kDefog); },
                         ErrorKind::kParse));
}

TEST(LoadTimeSeries, ExtraColumnsWarnButLoad) {
  TempDir dir;
  csv::WriteText(dir / "t.csv",
                 "Time,AccV,AccML,AccAP,StartHesitation,Turn,Walking,Valid,Task\n"
                 "0,1,0,0,0,0,0,true,true\n");
  std::vector<std::string> warnings;
  const auto previous =
      SetWarningSink([&](const std::string& m) { warnings.push_back(m); });
  const TimeSeries s = LoadTimeSeries(dir / "t.csv", Domain::kDefog);
  SetWarningSink(previous);
  EXPECT_EQ(s.length(), 1u);
  EXPECT_EQ(warnings.size(), 2u);
}

TEST(LoadTimeSeries, TwoActiveTypesRejected) {
  TempDir dir;
  csv::WriteText(dir / "t.csv", std::string(kTypedHeader) + "0,1,0,0,1,1,0\n");
  EXPECT_TRUE(ThrowsKind([&] { LoadTimeSeries(dir / "t.csv", Domain::kDefog); },
                         ErrorKind::kValidation));
}

TEST(TimeSeriesIo, WriteThenLoadReproducesValuesExactly) {
  TempDir dir;
  const TimeSeries original = GenerateTrial(
      11, Domain::kDefog, 3.0, {{EventType::kWalking, 0.5, 1.0}}, "roundtrip");
  WriteTimeSeries(original, dir / "roundtrip.csv");
  const TimeSeries loaded = LoadTimeSeries(dir / "roundtrip.csv", Domain::kDefog);
  ASSERT_EQ(loaded.length(), original.length());
  for (std::size_t t = 0; t < loaded.length(); ++t) {
    EXPECT_EQ(FormatNumber(loaded.acc_v[t]), FormatNumber(original.acc_v[t]));
    EXPECT_EQ(FormatNumber(loaded.acc_ml[t]), FormatNumber(original.acc_ml[t]));
    EXPECT_EQ(FormatNumber(loaded.acc_ap[t]), FormatNumber(original.acc_ap[t]));
  }
  EXPECT_EQ(loaded.typed_labels, original.typed_labels);
  // A second round trip is byte-stable.
  WriteTimeSeries(loaded, dir / "again.csv");
  EXPECT_EQ(csv::ReadText(dir / "roundtrip.csv"), csv::ReadText(dir / "again.csv"));
}

TEST(Metadata, ParsesMedicationAndRejectsDuplicates) {
  TempDir dir;
  csv::WriteText(dir / "subjects.csv",
                 "Subject,Age,Sex,YearsSinceDx,UPDRS_On,UPDRS_Off,NFOGQ\n"
                 "s1,70,M,5,20,30,0\n");
  csv::WriteText(dir / "meta.csv", "Id,Subject,Visit,Medication\nt1,s1,2,on\n");
  const auto loaded = LoadMetadataAndSubjects({dir / "meta.csv"}, dir / "subjects.csv");
  EXPECT_EQ(loaded.metadata.at("t1").medication, Medication::kOn);
  EXPECT_EQ(loaded.subjects.at("s1").nfogq, 0.0);

  csv::WriteText(dir / "dup.csv", "Id,Subject,Medication\nt1,s1,on\nt1,s1,off\n");
  EXPECT_TRUE(ThrowsKind(
      [&] { LoadMetadataAndSubjects({dir / "dup.csv"}, dir / "subjects.csv"); },
      ErrorKind::kIntegrity));

  csv::WriteText(dir / "bad.csv", "Id,Subject,Medication\nt2,s1,maybe\n");
  EXPECT_TRUE(ThrowsKind(
      [&] { LoadMetadataAndSubjects({dir / "bad.csv"}, dir / "subjects.csv"); },
      ErrorKind::kValidation));
}

TEST(Metadata, NegativeNfogqRejected) {
  TempDir dir;
  csv::WriteText(dir / "subjects.csv",
                 "Subject,Age,Sex,YearsSinceDx,UPDRS_On,UPDRS_Off,NFOGQ\n"
                 "s1,70,F,5,20,30,-1\n");
  EXPECT_TRUE(ThrowsKind([&] { LoadMetadataAndSubjects({}, dir / "subjects.csv"); },
                         ErrorKind::kValidation));
}

TEST(HarmonizeUnits, ScalesDefogOnlyAndOnlyOnce) {
  TimeSeries defog;
  defog.domain = Domain::kDefog;
  defog.acc_v = {1.0};
  defog.acc_ml = {2.0};
  defog.acc_ap = {-0.5};
  const TimeSeries h = HarmonizeUnits(defog);
  EXPECT_DOUBLE_EQ(h.acc_v[0], 9.81);
  EXPECT_DOUBLE_EQ(h.acc_ml[0], 19.62);
  EXPECT_TRUE(h.units_harmonized);
  EXPECT_TRUE(ThrowsKind([&] { HarmonizeUnits(h); }, ErrorKind::kValidation));

  TimeSeries tdcs = defog;
  tdcs.domain = Domain::kTdcsfog;
  EXPECT_DOUBLE_EQ(HarmonizeUnits(tdcs).acc_v[0], 1.0);
}

TEST(HarmonizeUnits, PreservesSampleRatios) {
  const TimeSeries s = GenerateTrial(5, Domain::kNotype, 2.0, {});
  const TimeSeries h = HarmonizeUnits(s);
  for (std::size_t t = 1; t < s.length(); ++t) {
    EXPECT_NEAR(h.acc_ap[t] / h.acc_ap[0], s.acc_ap[t] / s.acc_ap[0], 1e-9);
  }
}

TEST(GenerateTrial, DeterministicInSeed) {
  const std::vector<Episode> episodes = {{EventType::kTurn, 1.0, 2.0}};
  const TimeSeries a = GenerateTrial(7, Domain::kDefog, 6.0, episodes);
  const TimeSeries b = GenerateTrial(7, Domain::kDefog, 6.0, episodes);
  EXPECT_EQ(a.acc_v, b.acc_v);
  EXPECT_EQ(a.acc_ml, b.acc_ml);
  EXPECT_EQ(a.acc_ap, b.acc_ap);
  EXPECT_EQ(a.typed_labels, b.typed_labels);
  const TimeSeries c = GenerateTrial(8, Domain::kDefog, 6.0, episodes);
  EXPECT_NE(a.acc_v, c.acc_v);
}

TEST(GenerateTrial, LengthFollowsSampleRate) {
  EXPECT_EQ(GenerateTrial(1, Domain::kTdcsfog, 10.0, {}).length(), 1000u);
  EXPECT_EQ(GenerateTrial(1, Domain::kDefog, 10.0, {}).length(), 1240u);
}

TEST(GenerateTrial, NoEpisodesMeansNoLabels) {
  const TimeSeries s = GenerateTrial(3, Domain::kTdcsfog, 4.0, {});
  for (const auto& column : s.typed_labels) {
    for (auto v : column) EXPECT_EQ(v, 0);
  }
}

TEST(GenerateTrial, LabelMassMatchesEpisodeLengths) {
  const std::vector<Episode> episodes = {{EventType::kStartHesitation, 0.3, 1.27},
                                         {EventType::kWalking, 2.0, 0.91},
                                         {EventType::kTurn, 4.1, 1.5}};
  for (Domain d : {Domain::kDefog, Domain::kTdcsfog}) {
    const TimeSeries s = GenerateTrial(9, d, 8.0, episodes);
    s.Validate();  // mutually exclusive columns
    for (const auto& e : episodes) {
      std::size_t mass = 0;
      for (auto v : s.typed_labels[static_cast<int>(e.type)]) mass += v;
      EXPECT_NEAR(static_cast<double>(mass), e.length_s * s.sample_rate_hz, 1.0);
    }
  }
}

TEST(GenerateTrial, RejectsOverlapAndOutOfRange) {
  EXPECT_TRUE(ThrowsKind(
      [] {
        GenerateTrial(1, Domain::kDefog, 5.0,
                      {{EventType::kTurn, 1.0, 2.0}, {EventType::kWalking, 2.5, 1.0}});
      },
      ErrorKind::kValidation));
  EXPECT_TRUE(ThrowsKind(
      [] { GenerateTrial(1, Domain::kDefog, 5.0, {{EventType::kTurn, 4.0, 2.0}}); },
      ErrorKind::kValidation));
  EXPECT_TRUE(ThrowsKind(
      [] {
        GenerateTrial(1, Domain::kDefog, 5.0,
                      {{static_cast<EventType>(5), 1.0, 1.0}});
      },
      ErrorKind::kValidation));
}

TEST(GenerateTrial, EpisodesDampGait) {
  // The variance of AccML (no tremor for a start-hesitation episode on it)
  // drops inside the episode.
  const TimeSeries s = GenerateTrial(
      21, Domain::kTdcsfog, 20.0, {{EventType::kStartHesitation, 10.0, 10.0}});
  auto variance = [&](std::size_t begin, std::size_t end) {
    double mean = 0.0;
    for (std::size_t t = begin; t < end; ++t) mean += s.acc_ml[t];
    mean /= static_cast<double>(end - begin);
    double v = 0.0;
    for (std::size_t t = begin; t < end; ++t) v += std::pow(s.acc_ml[t] - mean, 2);
    return v / static_cast<double>(end - begin);
  };
  EXPECT_LT(variance(1000, 2000), variance(0, 1000));
}

TEST(Dataset, IntegrityRequiresMetadataAndSubjects) {
  Dataset d;
  d.series.push_back(GenerateTrial(1, Domain::kDefog, 1.0, {}, "t1"));
  EXPECT_TRUE(ThrowsKind([&] { d.CheckIntegrity(); }, ErrorKind::kIntegrity));
  d.metadata["t1"] = {"t1", "s1", Medication::kOn};
  EXPECT_TRUE(ThrowsKind([&] { d.CheckIntegrity(); }, ErrorKind::kIntegrity));
  d.subjects["s1"] = Subject{"s1", 60, Sex::kMale, 3, 10, 20, 5};
  EXPECT_NO_THROW(d.CheckIntegrity());
}

TEST(SyntheticCorpus, LoadsBackAndIsDeterministic) {
  TempDir a, b;
  SyntheticCorpusOptions options;
  options.seed = 4;
  options.defog_trials = 3;
  options.tdcsfog_trials = 2;
  options.notype_trials = 2;
  options.test_trials = 1;
  const auto summary = WriteSyntheticCorpus(options, a.path());
  WriteSyntheticCorpus(options, b.path());
  EXPECT_EQ(summary.series, 9u);
  const CorpusLayout layout{a.path()};
  const Dataset defog = LoadDomain(layout, "train", Domain::kDefog);
  EXPECT_EQ(defog.series.size(), 3u);
  defog.CheckIntegrity();
  const Dataset notype = LoadDomain(layout, "train", Domain::kNotype);
  notype.CheckIntegrity();
  EXPECT_EQ(csv::ReadText(layout.DefogMetadata()),
            csv::ReadText(CorpusLayout{b.path()}.DefogMetadata()));
  for (std::size_t i = 0; i < defog.series.size(); ++i) {
    const auto name = defog.series[i].trial_id + ".csv";
    EXPECT_EQ(csv::ReadText(layout.SeriesDir("train", Domain::kDefog) / name),
              csv::ReadText(CorpusLayout{b.path()}.SeriesDir("train", Domain::kDefog) /
                            name));
  }
}

TEST(CommittedCorpus, MatchesGenerator) {
  TempDir dir;
  SyntheticCorpusOptions options;
  options.seed = 7;
  options.defog_trials = 20;
  options.tdcsfog_trials = 0;
  options.notype_trials = 0;
  options.test_trials = 0;
  options.subjects = 6;
  WriteSyntheticCorpus(options, dir.path());
  const CorpusLayout fresh{dir.path()}, committed{::fog::testing::CorpusDir()};
  const Dataset a = LoadDomain(fresh, "train", Domain::kDefog);
  const Dataset b = LoadDomain(committed, "train", Domain::kDefog);
  ASSERT_EQ(a.series.size(), 20u);
  ASSERT_EQ(b.series.size(), 20u);
  for (std::size_t i = 0; i < a.series.size(); ++i) {
    EXPECT_EQ(a.series[i].trial_id, b.series[i].trial_id);
    EXPECT_EQ(a.series[i].acc_v, b.series[i].acc_v);
    EXPECT_EQ(a.series[i].typed_labels, b.series[i].typed_labels);
  }
  EXPECT_EQ(csv::ReadText(fresh.Subjects()), csv::ReadText(committed.Subjects()));
}

}  // namespace
}  // namespace fog
