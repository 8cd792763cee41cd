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

#ifndef FOG_MODEL_H_
#define FOG_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fog/features.h"
#include "fog/nn/layers.h"
#include "fog/tensor.h"

namespace fog {

struct TransBiLstmConfig {
  std::size_t input_dim = 3;
  std::size_t patch_len = 15;
  std::size_t model_dim = 320;
  std::size_t num_encoder_layers = 5;
  std::size_t num_heads = 6;
  std::size_t head_dim = 320;
  std::size_t ffn_units = 320;
  double dropout_rate = 0.1;
  std::size_t num_bilstm_layers = 3;
  std::size_t bilstm_output_dim = 320;
  std::size_t num_classes = 3;

  void Validate() const;
  friend bool operator==(const TransBiLstmConfig&,
                         const TransBiLstmConfig&) = default;
};

nlohmann::json ConfigToJson(const TransBiLstmConfig& config);
TransBiLstmConfig ConfigFromJson(const nlohmann::json& json);

// Closed-form parameter count: patch embedding, encoder layers, BiLSTM
// stack and output head.
std::size_t ParamCount(const TransBiLstmConfig& config);
std::size_t EncoderLayerParamCount(const TransBiLstmConfig& config);
std::size_t BiLstmLayerParamCount(std::size_t input_dim,
                                  std::size_t output_dim);

// attention -> residual -> layer norm -> dense/ReLU/dropout -> dense/dropout
// -> residual.
class EncoderLayer {
 public:
  struct Cache {
    nn::MultiHeadAttention::Cache attention;
    nn::LayerNorm::Cache norm;
    nn::Dense::Cache ffn_in, ffn_out;
    nn::Dropout::Cache drop_hidden, drop_out;
    Tensor hidden_pre;  // pre-ReLU activations
  };

  EncoderLayer(const std::string& name, const TransBiLstmConfig& config);

  Tensor Forward(const Tensor& x, nn::Mode mode, Rng* rng,
                 Cache* cache = nullptr) const;
  Tensor Backward(const Tensor& dy, const Cache& cache);

  void Init(Rng& rng);
  nn::ParameterRefs Parameters();

 private:
  nn::MultiHeadAttention attention_;
  nn::LayerNorm norm_;
  nn::Dense ffn_in_, ffn_out_;
  nn::Dropout drop_hidden_, drop_out_;
};

// Patch embedding -> encoder stack -> BiLSTM stack -> per-class logits.
// Each patch of `patch_len` timesteps yields one prediction that is repeated
// over the patch's timesteps.
class TransBiLstm {
 public:
  struct Cache {
    nn::Dense::Cache embedding;
    std::vector<EncoderLayer::Cache> encoders;
    std::vector<nn::BiLstm::Cache> bilstms;
    nn::Dense::Cache head;
  };

  explicit TransBiLstm(const TransBiLstmConfig& config);

  // Glorot-uniform weights, zero biases, LSTM forget bias 1.
  static TransBiLstm Init(const TransBiLstmConfig& config, std::uint64_t seed);

  const TransBiLstmConfig& config() const { return config_; }

  std::size_t NumPatches(std::size_t steps) const;
  // steps x D -> patches x (patch_len * D), tail zero-padded.
  Tensor Patchify(const Tensor& features) const;

  // Per-patch logits (patches x classes).
  Tensor ForwardLogits(const Tensor& features, nn::Mode mode, Rng* rng,
                       Cache* cache = nullptr) const;
  void Backward(const Tensor& dlogits, const Cache& cache);

  // Per-timestep probabilities (steps x classes), each in (0, 1).
  Tensor Forward(const Tensor& features, nn::Mode mode = nn::Mode::kEval,
                 std::uint64_t seed = 0) const;
  std::vector<Tensor> ForwardBatch(const std::vector<Tensor>& batch,
                                   nn::Mode mode = nn::Mode::kEval,
                                   std::uint64_t seed = 0) const;

  nn::ParameterRefs Parameters();
  std::size_t CountParameters() const;

 private:
  TransBiLstmConfig config_;
  nn::Dense embedding_;
  std::vector<EncoderLayer> encoders_;
  std::vector<nn::BiLstm> bilstms_;
  nn::Dense head_;
};

// Expands per-patch rows to per-timestep rows.
Tensor ExpandPatches(const Tensor& per_patch, std::size_t patch_len,
                     std::size_t steps);

inline constexpr int kCheckpointVersion = 1;

// Everything needed to apply a trained network to new trials.
struct ModelCheckpoint {
  TransBiLstm model;
  FeatureSetId feature_set = FeatureSetId::kA;
  std::vector<std::string> feature_columns;
  std::string fingerprint;
  std::optional<ColumnStats> standardization;
};

void SaveCheckpoint(const ModelCheckpoint& checkpoint,
                    const std::filesystem::path& path);
// Throws kIntegrity on version or fingerprint mismatch (when
// `expected_fingerprint` is non-empty).
ModelCheckpoint LoadCheckpoint(const std::filesystem::path& path,
                               const std::string& expected_fingerprint = "");

}  // namespace fog

#endif  // FOG_MODEL_H_
