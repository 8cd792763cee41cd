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

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.h"
#include "test_util.h"

namespace fog::cli {
namespace {

using ::fog::testing::CorpusDir;
using ::fog::testing::TempDir;

struct Result {
  int code;
  std::string out, err;
};

Result Fogtool(std::vector<std::string> args) {
  args.insert(args.begin(), "fogtool");
  std::ostringstream out, err;
  const int code = RunCommand(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json FirstErrorLine(const Result& r) {
  return nlohmann::json::parse(r.err.substr(0, r.err.find('\n')));
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { unsetenv(kDataRootVariable); }
  void TearDown() override { unsetenv(kDataRootVariable); }
};

TEST(ConfigText, ParsesKeyValueLines) {
  const Settings s = ParseConfigText(
      "# comment\n\n  seed = 5  \nmodel_dim=16 # trailing\nsplit = test\n", "cfg");
  EXPECT_EQ(s, (Settings{{"seed", "5"}, {"model_dim", "16"}, {"split", "test"}}));
  EXPECT_THROW(ParseConfigText("seed 5\n", "cfg"), UsageError);
}

TEST(ConfigText, OverlayRejectsUnknownKeys) {
  Settings base = DefaultSettings();
  Overlay(base, {{"seed", "9"}}, "x");
  EXPECT_EQ(base.at("seed"), "9");
  EXPECT_THROW(Overlay(base, {{"sede", "9"}}, "x"), UsageError);
}

TEST(ConfigText, DefaultsBuildAValidTrainConfig) {
  const TrainConfig c = TrainConfigFromSettings(DefaultSettings());
  EXPECT_EQ(TrainConfigToJson(c), TrainConfigToJson(TrainConfig{}));
  Settings s = DefaultSettings();
  s["window_len"] = "abc";
  try {
    TrainConfigFromSettings(s);
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
  }
}

TEST(ConfigText, SettingsTextRoundTrips) {
  Settings s = DefaultSettings();
  s["seed"] = "12";
  const std::string text = SettingsText(s, "train");
  EXPECT_EQ(text.substr(0, text.find('\n')), "# fogtool train");
  EXPECT_EQ(ParseConfigText(text, "resolved"), s);
}

TEST_F(CliTest, UsageErrorsExitTwoWithJsonLine) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {},
           {"bogus"},
           {"validate", "--no-such-flag"},
           {"train", "--data", CorpusDir().string(), "--out", "/tmp/x"},
           {"train", "--data", CorpusDir().string(), "--domain", "notype", "--out", "/tmp/x"},
           {"validate"},
       }) {
    const Result r = Fogtool(args);
    EXPECT_EQ(r.code, kExitUsage) << (args.empty() ? "" : args[0]);
    EXPECT_EQ(FirstErrorLine(r).at("error"), "usage") << r.err;
  }
  const Result bogus = Fogtool({"bogus"});
  EXPECT_NE(FirstErrorLine(bogus).at("message").get<std::string>().find("bogus"),
            std::string::npos);
}

TEST_F(CliTest, UnknownConfigKeyIsUsageBadValueIsParse) {
  TempDir dir;
  {
    std::ofstream(dir / "bad_key.cfg") << "windw_len = 3\n";
    std::ofstream(dir / "bad_value.cfg") << "window_len = many\n";
  }
  const Result key = Fogtool({"train", "--config", (dir / "bad_key.cfg").string(), "--domain",
                          "defog", "--data", CorpusDir().string(), "--out",
                          (dir / "o").string()});
  EXPECT_EQ(key.code, kExitUsage);
  const Result value = Fogtool({"train", "--config", (dir / "bad_value.cfg").string(),
                            "--domain", "defog", "--data", CorpusDir().string(), "--out",
                            (dir / "o").string()});
  EXPECT_EQ(value.code, kExitFailure);
  EXPECT_EQ(FirstErrorLine(value).at("error"), "parse");
}

TEST_F(CliTest, ValidateAcceptsCommittedCorpus) {
  TempDir dir;
  const Result r = Fogtool({"validate", "--data", CorpusDir().string(), "--out", dir.path().string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("train/defog: 20 series ok"), std::string::npos);
  const auto report = nlohmann::json::parse(ReadFile(dir / "validation.json"));
  EXPECT_EQ(report.at("train/defog"), 20);
}

TEST_F(CliTest, EnvironmentSuppliesDataRoot) {
  setenv(kDataRootVariable, CorpusDir().c_str(), 1);
  EXPECT_EQ(Fogtool({"validate"}).code, kExitOk);
  setenv(kDataRootVariable, "/nonexistent/fog", 1);
  const Result r = Fogtool({"validate"});
  EXPECT_EQ(r.code, kExitFailure);
  // The flag beats the environment.
  EXPECT_EQ(Fogtool({"validate", "--data", CorpusDir().string()}).code, kExitOk);
}

TEST_F(CliTest, FlagsOverrideConfigInResolvedFile) {
  TempDir dir;
  std::ofstream(dir / "c.cfg") << "seed = 4\nsubjects = 3\ndefog_trials = 2\n"
                               << "tdcsfog_trials = 1\nnotype_trials = 1\ntest_trials = 0\n";
  const Result r = Fogtool({"synth", "--config", (dir / "c.cfg").string(), "--seed", "6",
                        "--out", (dir / "corpus").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Settings resolved =
      ParseConfigText(ReadFile(dir / "corpus" / "resolved_config.txt"), "resolved");
  EXPECT_EQ(resolved.at("seed"), "6");
  EXPECT_EQ(resolved.at("subjects"), "3");
  EXPECT_EQ(Fogtool({"validate", "--data", (dir / "corpus").string()}).code, kExitOk);
}

TEST_F(CliTest, SetGWithoutClustersIsMissingDependency) {
  TempDir dir;
  const Result r = Fogtool({"features", "--data", CorpusDir().string(), "--domain", "defog",
                        "--feature-set", "G", "--out", dir.path().string()});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_EQ(FirstErrorLine(r).at("error"), "missing-dependency");
}

TEST_F(CliTest, FeaturesAndClustersFeedSetG) {
  TempDir dir;
  ASSERT_EQ(Fogtool({"cluster-subjects", "--data", CorpusDir().string(), "--k", "2", "--out",
                 (dir / "c").string()})
                .code,
            kExitOk);
  const Result r = Fogtool({"features", "--data", CorpusDir().string(), "--domain", "defog",
                        "--feature-set", "G", "--clusters",
                        (dir / "c" / "subject_clusters.csv").string(), "--out",
                        (dir / "f").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("matrices=20 set=G columns=9"), std::string::npos) << r.out;
}

TEST_F(CliTest, GradcheckPrintsPassLines) {
  TempDir dir;
  const Result r = Fogtool({"gradcheck", "--seeds", "1", "--out", dir.path().string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "gradcheck.json"));
}

}  // namespace
}  // namespace fog::cli
