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

#include "fog/log.h"
#include "fog/model.h"
#include "fog/random.h"
#include "test_util.h"

namespace fog {
namespace {

using ::fog::testing::TempDir;
using ::fog::testing::ThrowsKind;

TransBiLstmConfig Toy() {
  TransBiLstmConfig c;
  c.input_dim = 3;
  c.patch_len = 2;
  c.model_dim = 8;
  c.num_encoder_layers = 1;
  c.num_heads = 1;
  c.head_dim = 8;
  c.ffn_units = 16;
  c.num_bilstm_layers = 1;
  c.bilstm_output_dim = 8;
  return c;
}

Tensor Random(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Tensor t(rows, cols);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.Normal();
  return t;
}

TEST(ParamCount, ToyMatchesLayerByLayerSum) {
  const std::size_t embedding = (2 * 3) * 8 + 8;
  const std::size_t attention = 4 * (8 * 8 + 8);
  const std::size_t norm = 2 * 8;
  const std::size_t ffn = (8 * 16 + 16) + (16 * 8 + 8);
  const std::size_t lstm_direction = 4 * 4 * (8 + 4 + 1);
  const std::size_t head = 8 * 3 + 3;
  const std::size_t expected =
      embedding + attention + norm + ffn + 2 * lstm_direction + head;
  EXPECT_EQ(expected, 1083u);
  EXPECT_EQ(ParamCount(Toy()), expected);
  EXPECT_EQ(TransBiLstm::Init(Toy(), 1).CountParameters(), expected);
}

TEST(ParamCount, AffineInInputDimWithPatchSlope) {
  TransBiLstmConfig c;  // full-size defaults
  const std::size_t slope = c.patch_len * c.model_dim;
  EXPECT_EQ(slope, 4800u);
  c.input_dim = 3;
  const std::size_t base = ParamCount(c);
  for (std::size_t d : {3u, 4u, 7u, 8u, 9u, 11u}) {
    c.input_dim = d;
    EXPECT_EQ(ParamCount(c) - base, slope * (d - 3)) << d;
  }
  TransBiLstmConfig toy = Toy();
  for (std::size_t d = 1; d < 12; ++d) {
    toy.input_dim = d;
    EXPECT_EQ(TransBiLstm::Init(toy, 0).CountParameters(), ParamCount(toy));
  }
}

TEST(ParamCount, EncoderLayersAdd) {
  TransBiLstmConfig c = Toy();
  const std::size_t one = ParamCount(c);
  c.num_encoder_layers = 2;
  EXPECT_EQ(ParamCount(c) - one, EncoderLayerParamCount(c));
  TransBiLstmConfig full;
  const std::size_t five = ParamCount(full);
  full.num_encoder_layers = 10;
  EXPECT_EQ(ParamCount(full) - five, 5 * EncoderLayerParamCount(full));
}

TEST(Config, ValidationAndJsonRoundTrip) {
  TransBiLstmConfig bad = Toy();
  bad.bilstm_output_dim = 7;
  EXPECT_TRUE(ThrowsKind([&] { bad.Validate(); }, ErrorKind::kValidation));
  bad = Toy();
  bad.dropout_rate = 1.0;
  EXPECT_TRUE(ThrowsKind([&] { bad.Validate(); }, ErrorKind::kValidation));
  bad = Toy();
  bad.num_heads = 0;
  EXPECT_TRUE(ThrowsKind([&] { TransBiLstm{bad}; }, ErrorKind::kValidation));
  EXPECT_EQ(ConfigFromJson(ConfigToJson(Toy())), Toy());
}

TEST(Init, DeterministicWithStatedBiases) {
  TransBiLstm a = TransBiLstm::Init(Toy(), 5), b = TransBiLstm::Init(Toy(), 5);
  TransBiLstm c = TransBiLstm::Init(Toy(), 6);
  auto pa = a.Parameters(), pb = b.Parameters(), pc = c.Parameters();
  bool any_difference = false;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    EXPECT_EQ(pa[i]->value, pb[i]->value) << pa[i]->name;
    any_difference |= !(pa[i]->value == pc[i]->value);
  }
  EXPECT_TRUE(any_difference);
  const std::size_t hidden = Toy().bilstm_output_dim / 2;
  int lstm_biases = 0;
  for (nn::Parameter* p : pa) {
    const std::string& n = p->name;
    if (n.ends_with(".bias") && n.find("lstm") != std::string::npos) {
      ++lstm_biases;
      for (std::size_t i = 0; i < p->value.size(); ++i) {
        const bool forget = i >= hidden && i < 2 * hidden;
        EXPECT_EQ(p->value[i], forget ? 1.0 : 0.0) << n;
      }
    } else if (n.ends_with(".bias") || n.ends_with(".shift")) {
      for (std::size_t i = 0; i < p->value.size(); ++i) EXPECT_EQ(p->value[i], 0.0) << n;
    }
  }
  EXPECT_EQ(lstm_biases, 2);
}

TEST(Forward, ProbabilitiesAndPatchExpansion) {
  const TransBiLstm model = TransBiLstm::Init(Toy(), 2);
  TransBiLstmConfig five = Toy();
  five.patch_len = 5;
  const TransBiLstm wide = TransBiLstm::Init(five, 2);
  const Tensor x = Random(10, 3, 3);
  EXPECT_EQ(wide.NumPatches(10), 2u);
  const Tensor y = wide.Forward(x);
  ASSERT_EQ(y.rows(), 10u);
  ASSERT_EQ(y.cols(), 3u);
  for (std::size_t t = 0; t < 10; ++t) {
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_GT(y(t, k), 0.0);
      EXPECT_LT(y(t, k), 1.0);
      EXPECT_EQ(y(t, k), y(t < 5 ? 0 : 5, k));
    }
  }
  EXPECT_EQ(model.Forward(x), model.Forward(x));
  EXPECT_TRUE(ThrowsKind([&] { model.Forward(Random(10, 4, 1)); }, ErrorKind::kShape));
}

TEST(Forward, ShortSequencePadsAndWarns) {
  TransBiLstmConfig c = Toy();
  c.patch_len = 6;
  const TransBiLstm model = TransBiLstm::Init(c, 1);
  std::vector<std::string> warnings;
  const auto previous =
      SetWarningSink([&](const std::string& m) { warnings.push_back(m); });
  const Tensor y = model.Forward(Random(4, 3, 2));
  SetWarningSink(previous);
  EXPECT_EQ(y.rows(), 4u);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(Forward, EveryFeatureSetWidthYieldsThreeColumns) {
  for (std::size_t d : {3u, 4u, 7u, 9u, 11u, 10u}) {
    TransBiLstmConfig c = Toy();
    c.input_dim = d;
    const Tensor y = TransBiLstm::Init(c, d).Forward(Random(9, d, d));
    EXPECT_EQ(y.rows(), 9u);
    EXPECT_EQ(y.cols(), 3u);
  }
}

TEST(Forward, BatchPermutationPermutesOutputs) {
  const TransBiLstm model = TransBiLstm::Init(Toy(), 7);
  const std::vector<Tensor> batch = {Random(8, 3, 1), Random(6, 3, 2), Random(8, 3, 3)};
  const std::vector<Tensor> permuted = {batch[2], batch[0], batch[1]};
  const auto out = model.ForwardBatch(batch);
  const auto out_p = model.ForwardBatch(permuted);
  EXPECT_EQ(out_p[0], out[2]);
  EXPECT_EQ(out_p[1], out[0]);
  EXPECT_EQ(out_p[2], out[1]);
  EXPECT_EQ(out[1], model.Forward(batch[1]));
}

TEST(ExpandPatches, RepeatsRowsAndTruncates) {
  const Tensor per_patch = Tensor::FromRows({{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}});
  const Tensor e = ExpandPatches(per_patch, 3, 5);
  ASSERT_EQ(e.rows(), 5u);
  for (std::size_t t = 0; t < 5; ++t) {
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(e(t, k), per_patch(t / 3, k));
  }
}

TEST(Checkpoint, RoundTripAndFingerprintGuard) {
  TempDir dir;
  ModelCheckpoint ck{TransBiLstm::Init(Toy(), 9), FeatureSetId::kA,
                     FeatureColumns(FeatureSetId::kA), "", std::nullopt};
  ck.fingerprint = FeatureFingerprint(ck.feature_set, ck.feature_columns);
  SaveCheckpoint(ck, dir / "m.json");
  const ModelCheckpoint back = LoadCheckpoint(dir / "m.json", ck.fingerprint);
  EXPECT_EQ(back.model.config(), Toy());
  EXPECT_EQ(back.feature_columns, ck.feature_columns);
  const Tensor x = Random(12, 3, 4);
  EXPECT_EQ(back.model.Forward(x), ck.model.Forward(x));

  const std::string other =
      FeatureFingerprint(FeatureSetId::kB, FeatureColumns(FeatureSetId::kB));
  EXPECT_TRUE(ThrowsKind([&] { LoadCheckpoint(dir / "m.json", other); },
                         ErrorKind::kIntegrity));
}

}  // namespace
}  // namespace fog
