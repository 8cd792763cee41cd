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

#include "fog/model.h"

#include <algorithm>
#include <cmath>

#include "fog/csv.h"
#include "fog/error.h"
#include "fog/log.h"
#include "fog/nn/checkpoint.h"

namespace fog {
namespace {

void Append(nn::ParameterRefs& out, const nn::ParameterRefs& more) {
  out.insert(out.end(), more.begin(), more.end());
}

std::size_t DenseCount(std::size_t in, std::size_t out) { return in * out + out; }

}  // namespace

void TransBiLstmConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) Fail(ErrorKind::kValidation, std::string("model config: ") + what);
  };
  require(input_dim >= 1, "input_dim must be >= 1");
  require(patch_len >= 1, "patch_len must be >= 1");
  require(model_dim >= 1, "model_dim must be >= 1");
  require(num_encoder_layers >= 1, "num_encoder_layers must be >= 1");
  require(num_heads >= 1 && head_dim >= 1, "attention heads must be >= 1");
  require(ffn_units >= 1, "ffn_units must be >= 1");
  require(dropout_rate >= 0.0 && dropout_rate < 1.0, "dropout_rate in [0, 1)");
  require(num_bilstm_layers >= 1, "num_bilstm_layers must be >= 1");
  require(bilstm_output_dim >= 2 && bilstm_output_dim % 2 == 0,
          "bilstm_output_dim must be even");
  require(num_classes >= 1, "num_classes must be >= 1");
}

nlohmann::json ConfigToJson(const TransBiLstmConfig& c) {
  return {{"input_dim", c.input_dim},
          {"patch_len", c.patch_len},
          {"model_dim", c.model_dim},
          {"num_encoder_layers", c.num_encoder_layers},
          {"num_heads", c.num_heads},
          {"head_dim", c.head_dim},
          {"ffn_units", c.ffn_units},
          {"dropout_rate", c.dropout_rate},
          {"num_bilstm_layers", c.num_bilstm_layers},
          {"bilstm_output_dim", c.bilstm_output_dim},
          {"num_classes", c.num_classes}};
}

TransBiLstmConfig ConfigFromJson(const nlohmann::json& j) {
  TransBiLstmConfig c;
  c.input_dim = j.at("input_dim").get<std::size_t>();
  c.patch_len = j.at("patch_len").get<std::size_t>();
  c.model_dim = j.at("model_dim").get<std::size_t>();
  c.num_encoder_layers = j.at("num_encoder_layers").get<std::size_t>();
  c.num_heads = j.at("num_heads").get<std::size_t>();
  c.head_dim = j.at("head_dim").get<std::size_t>();
  c.ffn_units = j.at("ffn_units").get<std::size_t>();
  c.dropout_rate = j.at("dropout_rate").get<double>();
  c.num_bilstm_layers = j.at("num_bilstm_layers").get<std::size_t>();
  c.bilstm_output_dim = j.at("bilstm_output_dim").get<std::size_t>();
  c.num_classes = j.at("num_classes").get<std::size_t>();
  c.Validate();
  return c;
}

std::size_t EncoderLayerParamCount(const TransBiLstmConfig& c) {
  const std::size_t attn_width = c.num_heads * c.head_dim;
  const std::size_t attention =
      3 * DenseCount(c.model_dim, attn_width) + DenseCount(attn_width, c.model_dim);
  const std::size_t norm = 2 * c.model_dim;
  const std::size_t ffn =
      DenseCount(c.model_dim, c.ffn_units) + DenseCount(c.ffn_units, c.model_dim);
  return attention + norm + ffn;
}

std::size_t BiLstmLayerParamCount(std::size_t input_dim, std::size_t output_dim) {
  const std::size_t hidden = output_dim / 2;
  return 2 * (4 * hidden * (input_dim + hidden) + 4 * hidden);
}

std::size_t ParamCount(const TransBiLstmConfig& c) {
  c.Validate();
  std::size_t total = DenseCount(c.patch_len * c.input_dim, c.model_dim);
  total += c.num_encoder_layers * EncoderLayerParamCount(c);
  for (std::size_t i = 0; i < c.num_bilstm_layers; ++i) {
    total += BiLstmLayerParamCount(i == 0 ? c.model_dim : c.bilstm_output_dim,
                                   c.bilstm_output_dim);
  }
  total += DenseCount(c.bilstm_output_dim, c.num_classes);
  return total;
}

// --- EncoderLayer -----------------------------------------------------------

EncoderLayer::EncoderLayer(const std::string& name, const TransBiLstmConfig& c)
    : attention_(name + ".attention", c.model_dim, c.num_heads, c.head_dim),
      norm_(name + ".norm", c.model_dim),
      ffn_in_(name + ".ffn_in", c.model_dim, c.ffn_units),
      ffn_out_(name + ".ffn_out", c.ffn_units, c.model_dim),
      drop_hidden_(c.dropout_rate),
      drop_out_(c.dropout_rate) {}

void EncoderLayer::Init(Rng& rng) {
  attention_.Init(rng);
  ffn_in_.Init(rng);
  ffn_out_.Init(rng);
}

nn::ParameterRefs EncoderLayer::Parameters() {
  nn::ParameterRefs params = attention_.Parameters();
  Append(params, norm_.Parameters());
  Append(params, ffn_in_.Parameters());
  Append(params, ffn_out_.Parameters());
  return params;
}

Tensor EncoderLayer::Forward(const Tensor& x, nn::Mode mode, Rng* rng,
                             Cache* cache) const {
  Tensor attended = attention_.Forward(x, cache ? &cache->attention : nullptr);
  AddInPlace(attended, x);
  const Tensor normed = norm_.Forward(attended, cache ? &cache->norm : nullptr);
  Tensor hidden = ffn_in_.Forward(normed, cache ? &cache->ffn_in : nullptr);
  if (cache) cache->hidden_pre = hidden;
  for (double& v : hidden.values()) v = std::max(v, 0.0);
  hidden = drop_hidden_.Forward(hidden, mode, rng,
                                cache ? &cache->drop_hidden : nullptr);
  Tensor out = ffn_out_.Forward(hidden, cache ? &cache->ffn_out : nullptr);
  out = drop_out_.Forward(out, mode, rng, cache ? &cache->drop_out : nullptr);
  AddInPlace(out, normed);
  return out;
}

Tensor EncoderLayer::Backward(const Tensor& dy, const Cache& cache) {
  Tensor dhidden = ffn_out_.Backward(drop_out_.Backward(dy, cache.drop_out),
                                     cache.ffn_out);
  dhidden = drop_hidden_.Backward(dhidden, cache.drop_hidden);
  for (std::size_t i = 0; i < dhidden.size(); ++i) {
    if (cache.hidden_pre[i] <= 0.0) dhidden[i] = 0.0;
  }
  Tensor dnormed = ffn_in_.Backward(dhidden, cache.ffn_in);
  AddInPlace(dnormed, dy);
  const Tensor dattended = norm_.Backward(dnormed, cache.norm);
  Tensor dx = attention_.Backward(dattended, cache.attention);
  AddInPlace(dx, dattended);
  return dx;
}

// --- TransBiLstm ------------------------------------------------------------

TransBiLstm::TransBiLstm(const TransBiLstmConfig& config) : config_(config) {
  config_.Validate();
  embedding_ = nn::Dense("embedding", config_.patch_len * config_.input_dim,
                         config_.model_dim);
  for (std::size_t i = 0; i < config_.num_encoder_layers; ++i) {
    encoders_.emplace_back("encoder" + std::to_string(i), config_);
  }
  for (std::size_t i = 0; i < config_.num_bilstm_layers; ++i) {
    bilstms_.emplace_back("bilstm" + std::to_string(i),
                          i == 0 ? config_.model_dim : config_.bilstm_output_dim,
                          config_.bilstm_output_dim / 2);
  }
  head_ = nn::Dense("head", config_.bilstm_output_dim, config_.num_classes);
}

TransBiLstm TransBiLstm::Init(const TransBiLstmConfig& config,
                              std::uint64_t seed) {
  TransBiLstm model(config);
  Rng rng(seed);
  model.embedding_.Init(rng);
  for (auto& e : model.encoders_) e.Init(rng);
  for (auto& b : model.bilstms_) b.Init(rng);
  model.head_.Init(rng);
  return model;
}

nn::ParameterRefs TransBiLstm::Parameters() {
  nn::ParameterRefs params = embedding_.Parameters();
  for (auto& e : encoders_) Append(params, e.Parameters());
  for (auto& b : bilstms_) Append(params, b.Parameters());
  Append(params, head_.Parameters());
  return params;
}

std::size_t TransBiLstm::CountParameters() const {
  return nn::CountParameters(const_cast<TransBiLstm*>(this)->Parameters());
}

std::size_t TransBiLstm::NumPatches(std::size_t steps) const {
  return std::max<std::size_t>(1, (steps + config_.patch_len - 1) / config_.patch_len);
}

Tensor TransBiLstm::Patchify(const Tensor& features) const {
  if (features.rank() != 2 || features.cols() != config_.input_dim) {
    Fail(ErrorKind::kShape, "model expects " + std::to_string(config_.input_dim) +
                                " feature columns, got " + features.ShapeString());
  }
  const std::size_t steps = features.rows();
  const std::size_t p = config_.patch_len;
  const std::size_t d = config_.input_dim;
  const std::size_t patches = NumPatches(steps);
  Tensor out(patches, p * d);
  for (std::size_t t = 0; t < steps; ++t) {
    auto src = features.row(t);
    std::copy(src.begin(), src.end(), out.row(t / p).begin() + (t % p) * d);
  }
  return out;
}

Tensor TransBiLstm::ForwardLogits(const Tensor& features, nn::Mode mode,
                                  Rng* rng, Cache* cache) const {
  if (features.rows() < config_.patch_len) {
    Warn("sequence of " + std::to_string(features.rows()) +
         " steps is shorter than one patch; zero-padding");
  }
  if (cache) {
    cache->encoders.assign(encoders_.size(), EncoderLayer::Cache{});
    cache->bilstms.assign(bilstms_.size(), nn::BiLstm::Cache{});
  }
  Tensor x = embedding_.Forward(Patchify(features),
                                cache ? &cache->embedding : nullptr);
  for (std::size_t i = 0; i < encoders_.size(); ++i) {
    x = encoders_[i].Forward(x, mode, rng, cache ? &cache->encoders[i] : nullptr);
  }
  for (std::size_t i = 0; i < bilstms_.size(); ++i) {
    x = bilstms_[i].Forward(x, cache ? &cache->bilstms[i] : nullptr);
  }
  return head_.Forward(x, cache ? &cache->head : nullptr);
}

void TransBiLstm::Backward(const Tensor& dlogits, const Cache& cache) {
  Tensor dx = head_.Backward(dlogits, cache.head);
  for (std::size_t i = bilstms_.size(); i-- > 0;) {
    dx = bilstms_[i].Backward(dx, cache.bilstms[i]);
  }
  for (std::size_t i = encoders_.size(); i-- > 0;) {
    dx = encoders_[i].Backward(dx, cache.encoders[i]);
  }
  embedding_.Backward(dx, cache.embedding);
}

Tensor TransBiLstm::Forward(const Tensor& features, nn::Mode mode,
                            std::uint64_t seed) const {
  Rng rng(seed);
  Tensor logits = ForwardLogits(features, mode, &rng);
  for (double& v : logits.values()) v = nn::Sigmoid(v);
  return ExpandPatches(logits, config_.patch_len, features.rows());
}

std::vector<Tensor> TransBiLstm::ForwardBatch(const std::vector<Tensor>& batch,
                                              nn::Mode mode,
                                              std::uint64_t seed) const {
  std::vector<Tensor> out;
  out.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    out.push_back(Forward(batch[i], mode, seed + i));
  }
  return out;
}

Tensor ExpandPatches(const Tensor& per_patch, std::size_t patch_len,
                     std::size_t steps) {
  Tensor out(steps, per_patch.cols());
  for (std::size_t t = 0; t < steps; ++t) {
    auto src = per_patch.row(t / patch_len);
    std::copy(src.begin(), src.end(), out.row(t).begin());
  }
  return out;
}

// --- Checkpoints ------------------------------------------------------------

void SaveCheckpoint(const ModelCheckpoint& checkpoint,
                    const std::filesystem::path& path) {
  nlohmann::json j;
  j["format"] = "fogtype-checkpoint";
  j["version"] = kCheckpointVersion;
  j["config"] = ConfigToJson(checkpoint.model.config());
  j["feature_set"] = std::string(1, FeatureSetName(checkpoint.feature_set));
  j["feature_columns"] = checkpoint.feature_columns;
  j["fingerprint"] = checkpoint.fingerprint;
  if (checkpoint.standardization) {
    j["standardization"] = {{"columns", checkpoint.standardization->columns},
                            {"mean", checkpoint.standardization->mean},
                            {"stddev", checkpoint.standardization->stddev}};
  }
  auto& model = const_cast<TransBiLstm&>(checkpoint.model);
  j["parameters"] = nn::ParametersToJson(model.Parameters());
  csv::WriteText(path, j.dump() + "\n");
}

ModelCheckpoint LoadCheckpoint(const std::filesystem::path& path,
                               const std::string& expected_fingerprint) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(csv::ReadText(path));
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kParse, path.string() + ": " + e.what());
  }
  if (j.value("format", "") != "fogtype-checkpoint" ||
      j.value("version", 0) != kCheckpointVersion) {
    Fail(ErrorKind::kIntegrity, path.string() + ": not a version " +
                                    std::to_string(kCheckpointVersion) +
                                    " checkpoint");
  }
  ModelCheckpoint checkpoint{
      TransBiLstm(ConfigFromJson(j.at("config"))),
      ParseFeatureSet(j.at("feature_set").get<std::string>()),
      j.at("feature_columns").get<std::vector<std::string>>(),
      j.at("fingerprint").get<std::string>(),
      std::nullopt};
  if (checkpoint.fingerprint !=
      FeatureFingerprint(checkpoint.feature_set, checkpoint.feature_columns)) {
    Fail(ErrorKind::kIntegrity, path.string() + ": corrupt feature fingerprint");
  }
  if (!expected_fingerprint.empty() &&
      checkpoint.fingerprint != expected_fingerprint) {
    Fail(ErrorKind::kIntegrity, path.string() +
                                    ": feature fingerprint mismatch (checkpoint " +
                                    checkpoint.fingerprint + ", expected " +
                                    expected_fingerprint + ")");
  }
  if (j.contains("standardization")) {
    const auto& s = j.at("standardization");
    checkpoint.standardization = ColumnStats{
        s.at("columns").get<std::vector<std::string>>(),
        s.at("mean").get<std::vector<double>>(),
        s.at("stddev").get<std::vector<double>>()};
  }
  nn::LoadParametersFromJson(j.at("parameters"), checkpoint.model.Parameters());
  return checkpoint;
}

}  // namespace fog
