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

#ifndef FOG_TRAINING_H_
#define FOG_TRAINING_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fog/data.h"
#include "fog/features.h"
#include "fog/model.h"
#include "fog/tensor.h"

namespace fog {

struct TrainConfig {
  std::size_t window_len = 512;
  std::size_t window_stride = 256;
  std::size_t batch_size = 16;
  std::size_t max_epochs = 50;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;
  std::size_t num_folds = 3;
  FeatureSetId feature_set = FeatureSetId::kC;
  bool standardize = true;
  double pseudo_weight = 1.0;
  // Folds trained concurrently; results do not depend on this.
  std::size_t workers = 1;
  // input_dim is overwritten from the feature matrices.
  TransBiLstmConfig model;

  void Validate() const;
};

nlohmann::json TrainConfigToJson(const TrainConfig& config);
TrainConfig TrainConfigFromJson(const nlohmann::json& json);

// Features and typed labels of one trial, before standardization.
struct TrialData {
  FeatureMatrix features;
  Tensor labels;  // T x 3
  bool pseudo = false;

  const std::string& trial_id() const { return features.trial_id; }
};

// Harmonizes units if needed and builds features and labels for every typed
// series of the dataset.
std::vector<TrialData> PrepareTrials(const Dataset& dataset, FeatureSetId set,
                                     const SubjectClusters* clusters = nullptr);

struct Window {
  std::string trial_id;
  std::size_t start = 0;
  Tensor features;           // W x D, zero rows past the trial end
  Tensor labels;             // W x 3
  std::vector<double> mask;  // W, 1 on real timesteps
  double weight = 1.0;
};

// Windows start at 0, S, 2S, ...; count = ceil(max(T - W, 0) / S) + 1.
std::vector<Window> MakeWindows(const FeatureMatrix& matrix, const Tensor& labels,
                                std::size_t window_len, std::size_t stride);

// Per-patch majority labels over the valid timesteps (ties positive), plus
// a row weight of 0 for patches with no valid timestep.
struct PatchTargets {
  Tensor targets;
  std::vector<double> weights;
};
PatchTargets MakePatchTargets(const Tensor& labels, std::span<const double> mask,
                              std::size_t patch_len);

// Adaptive-moment gradient descent.
class AdamOptimizer {
 public:
  AdamOptimizer(double learning_rate, double beta1, double beta2, double epsilon);
  void Step(const nn::ParameterRefs& params);
  std::size_t steps() const { return step_; }

 private:
  double learning_rate_, beta1_, beta2_, epsilon_;
  std::size_t step_ = 0;
  std::vector<Tensor> first_, second_;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_mae = 0.0;
};

struct FoldTrainingResult {
  TransBiLstm model;  // snapshot of the epoch with the lowest val MAE
  std::vector<EpochRecord> curve;
  std::size_t best_epoch = 0;
  double best_val_mae = 0.0;
};

// Trains from a seeded initialization for config.max_epochs, keeping the
// earliest epoch with minimal validation MAE. Throws kNumeric on a
// non-finite loss.
FoldTrainingResult TrainFold(const std::vector<Window>& train,
                             const std::vector<Window>& val,
                             const TrainConfig& config,
                             const TransBiLstmConfig& model_config,
                             std::uint64_t seed);

// Mean |p - y| over valid timesteps of the windows (eval mode).
double WindowMae(const TransBiLstm& model, const std::vector<Window>& windows);

// Windowed eval-mode inference over a full (already standardized) trial;
// overlapping windows are averaged per timestep.
Tensor PredictTrial(const TransBiLstm& model, const Tensor& features,
                    std::size_t window_len, std::size_t stride);

// Trial-level fold index per trial. Real and pseudo trials are dealt
// separately so every fold validates on real trials.
std::vector<std::size_t> AssignFolds(const std::vector<TrialData>& trials,
                                     std::size_t num_folds, std::uint64_t seed);

struct GroupMember {
  ModelCheckpoint checkpoint;
  std::size_t fold = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> validation_trials;
  double oof_map = 0.0;
  std::size_t best_epoch = 0;
  double best_val_mae = 0.0;
  std::vector<EpochRecord> curve;
};

struct ModelGroup {
  std::string group_id;
  Domain domain = Domain::kDefog;
  FeatureSetId feature_set = FeatureSetId::kC;
  bool uses_pseudo = false;
  TrainConfig config;
  std::vector<GroupMember> members;
  std::map<std::string, std::size_t> fold_assignment;
  double group_map = 0.0;  // mean of member out-of-fold MAPs
};

std::string MakeGroupId(Domain domain, FeatureSetId set, bool uses_pseudo,
                        std::uint64_t seed);

// One cross-validation run: each fold trains on the other folds' trials and
// reports MAP on its own real validation trials.
ModelGroup TrainModelGroup(const std::vector<TrialData>& trials,
                           const TrainConfig& config, Domain domain);

// Applies one member (with its standardization) to raw features.
Tensor PredictMember(const GroupMember& member, const FeatureMatrix& features,
                     std::size_t window_len, std::size_t stride);

// Pointwise mean of the members' probabilities. Throws kIntegrity when the
// feature layout differs from what the members were trained on.
Tensor PredictGroup(const ModelGroup& group, const FeatureMatrix& features);

// MAP of the group's predictions over the concatenation of `trials`.
double GroupMapOn(const ModelGroup& group, const std::vector<TrialData>& trials);

// <dir>/manifest.json, <dir>/fold<i>.checkpoint.json, <dir>/fold<i>_log.csv.
// Returns the manifest path.
std::filesystem::path SaveModelGroup(const ModelGroup& group,
                                     const std::filesystem::path& dir);
ModelGroup LoadModelGroup(const std::filesystem::path& manifest_path);

}  // namespace fog

#endif  // FOG_TRAINING_H_
