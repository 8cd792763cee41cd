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

#include "fog/training.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <sstream>

#include "fog/csv.h"
#include "fog/error.h"
#include "fog/evaluation.h"
#include "fog/random.h"

namespace fog {
namespace {

constexpr std::uint64_t kShuffleSalt = 0x9E3779B97F4A7C15ULL;

FeatureMatrix Prepared(const FeatureMatrix& raw, const ColumnStats* stats) {
  return stats ? Standardize(raw, *stats) : raw;
}

std::vector<Window> WindowsFor(const std::vector<const TrialData*>& trials,
                               const ColumnStats* stats, std::size_t len,
                               std::size_t stride, double pseudo_weight) {
  std::vector<Window> windows;
  for (const TrialData* trial : trials) {
    auto w = MakeWindows(Prepared(trial->features, stats), trial->labels, len,
                         stride);
    for (auto& window : w) window.weight = trial->pseudo ? pseudo_weight : 1.0;
    windows.insert(windows.end(), std::make_move_iterator(w.begin()),
                   std::make_move_iterator(w.end()));
  }
  return windows;
}

Tensor ConcatRows(const std::vector<Tensor>& parts) {
  std::size_t rows = 0;
  const std::size_t cols = parts.empty() ? 0 : parts.front().cols();
  for (const auto& p : parts) rows += p.rows();
  Tensor out(rows, cols);
  std::size_t r = 0;
  for (const auto& p : parts) {
    std::copy(p.values().begin(), p.values().end(), out.row(r).begin());
    r += p.rows();
  }
  return out;
}

std::string CurveCsv(const std::vector<EpochRecord>& curve) {
  std::ostringstream out;
  out << "epoch,train_loss,val_mae\n";
  for (const auto& e : curve) {
    out << e.epoch << ',' << FormatNumber(e.train_loss) << ','
        << FormatNumber(e.val_mae) << '\n';
  }
  return out.str();
}

}  // namespace

void TrainConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) Fail(ErrorKind::kValidation, std::string("train config: ") + what);
  };
  require(window_len >= 1, "window_len must be >= 1");
  require(window_stride >= 1 && window_stride <= window_len,
          "window_stride must be in [1, window_len]");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(max_epochs >= 1, "max_epochs must be >= 1");
  require(learning_rate > 0.0, "learning_rate must be > 0");
  require(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0,
          "moment decays must be in [0, 1)");
  require(num_folds >= 2, "num_folds must be >= 2");
  require(pseudo_weight >= 0.0, "pseudo_weight must be >= 0");
  require(workers >= 1, "workers must be >= 1");
}

nlohmann::json TrainConfigToJson(const TrainConfig& c) {
  return {{"window_len", c.window_len},
          {"window_stride", c.window_stride},
          {"batch_size", c.batch_size},
          {"max_epochs", c.max_epochs},
          {"learning_rate", c.learning_rate},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"adam_epsilon", c.adam_epsilon},
          {"seed", c.seed},
          {"num_folds", c.num_folds},
          {"feature_set", std::string(1, FeatureSetName(c.feature_set))},
          {"standardize", c.standardize},
          {"pseudo_weight", c.pseudo_weight},
          {"model", ConfigToJson(c.model)}};
}

TrainConfig TrainConfigFromJson(const nlohmann::json& j) {
  TrainConfig c;
  c.window_len = j.at("window_len").get<std::size_t>();
  c.window_stride = j.at("window_stride").get<std::size_t>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.max_epochs = j.at("max_epochs").get<std::size_t>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.beta1 = j.at("beta1").get<double>();
  c.beta2 = j.at("beta2").get<double>();
  c.adam_epsilon = j.at("adam_epsilon").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.num_folds = j.at("num_folds").get<std::size_t>();
  c.feature_set = ParseFeatureSet(j.at("feature_set").get<std::string>());
  c.standardize = j.at("standardize").get<bool>();
  c.pseudo_weight = j.at("pseudo_weight").get<double>();
  c.model = ConfigFromJson(j.at("model"));
  return c;
}

std::vector<TrialData> PrepareTrials(const Dataset& dataset, FeatureSetId set,
                                     const SubjectClusters* clusters) {
  std::vector<TrialData> trials;
  for (std::size_t i = 0; i < dataset.series.size(); ++i) {
    const TimeSeries& raw = dataset.series[i];
    if (!raw.has_typed_labels()) continue;
    const TimeSeries series = raw.units_harmonized ? raw : HarmonizeUnits(raw);
    TrialData trial;
    trial.features = BuildFeatureMatrix(series, set, dataset, clusters);
    trial.labels = series.LabelMatrix();
    trial.pseudo = i < dataset.pseudo.size() && dataset.pseudo[i];
    trials.push_back(std::move(trial));
  }
  return trials;
}

std::vector<Window> MakeWindows(const FeatureMatrix& matrix, const Tensor& labels,
                                std::size_t window_len, std::size_t stride) {
  if (window_len < 1 || stride < 1) {
    Fail(ErrorKind::kValidation, "window length and stride must be >= 1");
  }
  const std::size_t steps = matrix.length();
  if (steps == 0) return {};
  if (labels.rows() != steps) {
    Fail(ErrorKind::kShape, matrix.trial_id + ": label rows differ from features");
  }
  const std::size_t excess = steps > window_len ? steps - window_len : 0;
  const std::size_t count = (excess + stride - 1) / stride + 1;
  std::vector<Window> windows;
  windows.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Window w;
    w.trial_id = matrix.trial_id;
    w.start = i * stride;
    w.features = Tensor(window_len, matrix.dim());
    w.labels = Tensor(window_len, labels.cols());
    w.mask.assign(window_len, 0.0);
    for (std::size_t t = 0; t < window_len && w.start + t < steps; ++t) {
      auto f = matrix.values.row(w.start + t);
      std::copy(f.begin(), f.end(), w.features.row(t).begin());
      auto l = labels.row(w.start + t);
      std::copy(l.begin(), l.end(), w.labels.row(t).begin());
      w.mask[t] = 1.0;
    }
    windows.push_back(std::move(w));
  }
  return windows;
}

PatchTargets MakePatchTargets(const Tensor& labels, std::span<const double> mask,
                              std::size_t patch_len) {
  const std::size_t steps = labels.rows();
  const std::size_t patches =
      std::max<std::size_t>(1, (steps + patch_len - 1) / patch_len);
  PatchTargets out{Tensor(patches, labels.cols()),
                   std::vector<double>(patches, 0.0)};
  std::vector<double> valid(patches, 0.0);
  Tensor ones(patches, labels.cols());
  for (std::size_t t = 0; t < steps; ++t) {
    if (!mask.empty() && mask[t] == 0.0) continue;
    const std::size_t p = t / patch_len;
    valid[p] += 1.0;
    for (std::size_t c = 0; c < labels.cols(); ++c) ones(p, c) += labels(t, c);
  }
  for (std::size_t p = 0; p < patches; ++p) {
    if (valid[p] == 0.0) continue;
    out.weights[p] = 1.0;
    for (std::size_t c = 0; c < labels.cols(); ++c) {
      out.targets(p, c) = 2.0 * ones(p, c) >= valid[p] ? 1.0 : 0.0;
    }
  }
  return out;
}

AdamOptimizer::AdamOptimizer(double learning_rate, double beta1, double beta2,
                             double epsilon)
    : learning_rate_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      epsilon_(epsilon) {}

void AdamOptimizer::Step(const nn::ParameterRefs& params) {
  if (first_.empty()) {
    for (const auto* p : params) {
      first_.emplace_back(p->value.shape());
      second_.emplace_back(p->value.shape());
    }
  }
  ++step_;
  const double correction1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto value = params[i]->value.values();
    auto grad = params[i]->grad.values();
    auto m = first_[i].values();
    auto v = second_[i].values();
    for (std::size_t j = 0; j < value.size(); ++j) {
      m[j] = beta1_ * m[j] + (1.0 - beta1_) * grad[j];
      v[j] = beta2_ * v[j] + (1.0 - beta2_) * grad[j] * grad[j];
      const double m_hat = m[j] / correction1;
      const double v_hat = v[j] / correction2;
      value[j] -= learning_rate_ * m_hat / (std::sqrt(v_hat) + epsilon_);
    }
  }
}

double WindowMae(const TransBiLstm& model, const std::vector<Window>& windows) {
  double sum = 0.0;
  double count = 0.0;
  for (const auto& w : windows) {
    const Tensor probs = model.Forward(w.features, nn::Mode::kEval);
    for (std::size_t t = 0; t < w.mask.size(); ++t) {
      if (w.mask[t] == 0.0) continue;
      for (std::size_t c = 0; c < probs.cols(); ++c) {
        sum += std::abs(probs(t, c) - w.labels(t, c));
        count += 1.0;
      }
    }
  }
  if (count == 0.0) Fail(ErrorKind::kValidation, "no validation timesteps");
  return sum / count;
}

FoldTrainingResult TrainFold(const std::vector<Window>& train,
                             const std::vector<Window>& val,
                             const TrainConfig& config,
                             const TransBiLstmConfig& model_config,
                             std::uint64_t seed) {
  config.Validate();
  if (train.empty() || val.empty()) {
    Fail(ErrorKind::kValidation, "training and validation sets must be non-empty");
  }
  TransBiLstm model = TransBiLstm::Init(model_config, seed);
  FoldTrainingResult result{model, {}, 0, 0.0};
  const nn::ParameterRefs params = model.Parameters();
  AdamOptimizer optimizer(config.learning_rate, config.beta1, config.beta2,
                          config.adam_epsilon);
  Rng rng(seed ^ kShuffleSalt);
  const std::size_t patch_len = model_config.patch_len;

  std::vector<PatchTargets> targets;
  targets.reserve(train.size());
  for (const auto& w : train) {
    targets.push_back(MakePatchTargets(w.labels, w.mask, patch_len));
  }

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.Shuffle(order);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      const double scale = 1.0 / static_cast<double>(end - begin);
      nn::ZeroGrad(params);
      double batch_loss = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        const Window& w = train[order[i]];
        const PatchTargets& target = targets[order[i]];
        Rng dropout_rng(rng.NextSeed());
        TransBiLstm::Cache cache;
        const Tensor logits =
            model.ForwardLogits(w.features, nn::Mode::kTrain, &dropout_rng, &cache);
        Tensor dlogits;
        const double loss = nn::BinaryCrossEntropyWithLogits(
            logits, target.targets, target.weights, &dlogits);
        if (!std::isfinite(loss)) {
          Fail(ErrorKind::kNumeric,
               "non-finite loss (learning_rate " + FormatNumber(config.learning_rate) +
                   ", epoch " + std::to_string(epoch) + ", batch " +
                   std::to_string(batches) + ")");
        }
        batch_loss += w.weight * loss * scale;
        for (double& g : dlogits.values()) g *= w.weight * scale;
        model.Backward(dlogits, cache);
      }
      optimizer.Step(params);
      loss_sum += batch_loss;
      ++batches;
    }
    const double val_mae = WindowMae(model, val);
    result.curve.push_back({epoch, loss_sum / static_cast<double>(batches), val_mae});
    if (val_mae < best) {
      best = val_mae;
      result.model = model;
      result.best_epoch = epoch;
      result.best_val_mae = val_mae;
    }
  }
  return result;
}

Tensor PredictTrial(const TransBiLstm& model, const Tensor& features,
                    std::size_t window_len, std::size_t stride) {
  const std::size_t steps = features.rows();
  Tensor sum(steps, model.config().num_classes);
  std::vector<double> count(steps, 0.0);
  const std::size_t excess = steps > window_len ? steps - window_len : 0;
  const std::size_t windows = (excess + stride - 1) / stride + 1;
  for (std::size_t i = 0; i < windows; ++i) {
    const std::size_t start = i * stride;
    const std::size_t len = std::min(window_len, steps - start);
    Tensor chunk(window_len, features.cols());
    for (std::size_t t = 0; t < len; ++t) {
      auto src = features.row(start + t);
      std::copy(src.begin(), src.end(), chunk.row(t).begin());
    }
    const Tensor probs = model.Forward(chunk, nn::Mode::kEval);
    for (std::size_t t = 0; t < len; ++t) {
      for (std::size_t c = 0; c < sum.cols(); ++c) sum(start + t, c) += probs(t, c);
      count[start + t] += 1.0;
    }
  }
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t c = 0; c < sum.cols(); ++c) sum(t, c) /= count[t];
  }
  return sum;
}

std::vector<std::size_t> AssignFolds(const std::vector<TrialData>& trials,
                                     std::size_t num_folds, std::uint64_t seed) {
  std::vector<std::size_t> real, pseudo;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    (trials[i].pseudo ? pseudo : real).push_back(i);
  }
  if (real.size() < num_folds) {
    Fail(ErrorKind::kValidation,
         "need at least " + std::to_string(num_folds) + " real trials for " +
             std::to_string(num_folds) + "-fold cross-validation, got " +
             std::to_string(real.size()));
  }
  Rng rng(seed);
  rng.Shuffle(real);
  rng.Shuffle(pseudo);
  std::vector<std::size_t> folds(trials.size(), 0);
  for (std::size_t i = 0; i < real.size(); ++i) folds[real[i]] = i % num_folds;
  for (std::size_t i = 0; i < pseudo.size(); ++i) folds[pseudo[i]] = i % num_folds;
  return folds;
}

std::string MakeGroupId(Domain domain, FeatureSetId set, bool uses_pseudo,
                        std::uint64_t seed) {
  return std::string(DomainName(domain)) + "-" + FeatureSetName(set) +
         (uses_pseudo ? "-pseudo" : "") + "-seed" + std::to_string(seed);
}

ModelGroup TrainModelGroup(const std::vector<TrialData>& trials,
                           const TrainConfig& config, Domain domain) {
  config.Validate();
  if (trials.empty()) Fail(ErrorKind::kValidation, "no trials to train on");
  for (const auto& t : trials) {
    if (t.features.set_id != config.feature_set) {
      Fail(ErrorKind::kIntegrity, t.trial_id() + ": built for feature set " +
                                      FeatureSetName(t.features.set_id) +
                                      ", config says " +
                                      FeatureSetName(config.feature_set));
    }
    if (t.features.columns != trials.front().features.columns) {
      Fail(ErrorKind::kIntegrity, "feature columns differ across trials");
    }
  }
  const std::vector<std::size_t> folds =
      AssignFolds(trials, config.num_folds, config.seed);

  ModelGroup group;
  group.domain = domain;
  group.feature_set = config.feature_set;
  group.uses_pseudo = std::any_of(trials.begin(), trials.end(),
                                  [](const TrialData& t) { return t.pseudo; });
  group.group_id = MakeGroupId(domain, config.feature_set, group.uses_pseudo,
                               config.seed);
  group.config = config;
  group.config.model.input_dim = trials.front().features.dim();
  for (std::size_t i = 0; i < trials.size(); ++i) {
    group.fold_assignment[trials[i].trial_id()] = folds[i];
  }
  const auto& columns = trials.front().features.columns;
  const std::string fingerprint = FeatureFingerprint(config.feature_set, columns);

  auto train_one = [&](std::size_t fold) {
    std::vector<const TrialData*> train_trials, val_trials;
    std::vector<FeatureMatrix> train_features;
    for (std::size_t i = 0; i < trials.size(); ++i) {
      if (folds[i] == fold) {
        if (!trials[i].pseudo) val_trials.push_back(&trials[i]);
      } else {
        train_trials.push_back(&trials[i]);
        train_features.push_back(trials[i].features);
      }
    }
    std::optional<ColumnStats> stats;
    if (group.config.standardize) stats = FitColumnStats(train_features);
    const ColumnStats* stats_ptr = stats ? &*stats : nullptr;
    const auto& c = group.config;
    const auto train = WindowsFor(train_trials, stats_ptr, c.window_len,
                                  c.window_stride, c.pseudo_weight);
    const auto val =
        WindowsFor(val_trials, stats_ptr, c.window_len, c.window_len, 1.0);
    const std::uint64_t seed = c.seed + fold;
    FoldTrainingResult trained = TrainFold(train, val, c, c.model, seed);

    GroupMember member{ModelCheckpoint{std::move(trained.model), c.feature_set,
                                       columns, fingerprint, stats},
                       fold,
                       seed,
                       {},
                       0.0,
                       trained.best_epoch,
                       trained.best_val_mae,
                       std::move(trained.curve)};
    std::vector<Tensor> predictions, labels;
    for (const TrialData* t : val_trials) {
      member.validation_trials.push_back(t->trial_id());
      predictions.push_back(
          PredictMember(member, t->features, c.window_len, c.window_stride));
      labels.push_back(t->labels);
    }
    member.oof_map = MapScore(ConcatRows(predictions), ConcatRows(labels));
    return member;
  };

  const std::size_t workers = std::max<std::size_t>(1, config.workers);
  for (std::size_t begin = 0; begin < config.num_folds; begin += workers) {
    const std::size_t end = std::min(config.num_folds, begin + workers);
    if (end - begin == 1) {
      group.members.push_back(train_one(begin));
      continue;
    }
    std::vector<std::future<GroupMember>> pending;
    for (std::size_t fold = begin; fold < end; ++fold) {
      pending.push_back(std::async(std::launch::async, train_one, fold));
    }
    for (auto& f : pending) group.members.push_back(f.get());
  }
  double total = 0.0;
  for (const auto& m : group.members) total += m.oof_map;
  group.group_map = total / static_cast<double>(group.members.size());
  return group;
}

Tensor PredictMember(const GroupMember& member, const FeatureMatrix& features,
                     std::size_t window_len, std::size_t stride) {
  const auto& ckpt = member.checkpoint;
  if (FeatureFingerprint(features.set_id, features.columns) != ckpt.fingerprint) {
    Fail(ErrorKind::kIntegrity, features.trial_id +
                                    ": feature layout does not match the "
                                    "layout the model was trained on");
  }
  const FeatureMatrix prepared =
      ckpt.standardization ? Standardize(features, *ckpt.standardization) : features;
  return PredictTrial(ckpt.model, prepared.values, window_len, stride);
}

Tensor PredictGroup(const ModelGroup& group, const FeatureMatrix& features) {
  if (group.members.empty()) Fail(ErrorKind::kValidation, "empty model group");
  Tensor mean;
  for (const auto& member : group.members) {
    const Tensor p = PredictMember(member, features, group.config.window_len,
                                   group.config.window_stride);
    if (mean.empty()) {
      mean = p;
    } else {
      AddInPlace(mean, p);
    }
  }
  const double n = static_cast<double>(group.members.size());
  for (double& v : mean.values()) v /= n;
  return mean;
}

double GroupMapOn(const ModelGroup& group, const std::vector<TrialData>& trials) {
  std::vector<Tensor> predictions, labels;
  for (const auto& t : trials) {
    predictions.push_back(PredictGroup(group, t.features));
    labels.push_back(t.labels);
  }
  return MapScore(ConcatRows(predictions), ConcatRows(labels));
}

std::filesystem::path SaveModelGroup(const ModelGroup& group,
                                     const std::filesystem::path& dir) {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& m : group.members) {
    const std::string stem = "fold" + std::to_string(m.fold);
    SaveCheckpoint(m.checkpoint, dir / (stem + ".checkpoint.json"));
    csv::WriteText(dir / (stem + "_log.csv"), CurveCsv(m.curve));
    members.push_back({{"fold", m.fold},
                       {"checkpoint", stem + ".checkpoint.json"},
                       {"log", stem + "_log.csv"},
                       {"seed", m.seed},
                       {"validation_trials", m.validation_trials},
                       {"oof_map", m.oof_map},
                       {"best_epoch", m.best_epoch},
                       {"best_val_mae", m.best_val_mae}});
  }
  nlohmann::json folds = nlohmann::json::object();
  for (const auto& [trial, fold] : group.fold_assignment) folds[trial] = fold;
  nlohmann::json manifest = {
      {"format", "fogtype-group"},
      {"version", 1},
      {"group_id", group.group_id},
      {"domain", DomainName(group.domain)},
      {"feature_set", std::string(1, FeatureSetName(group.feature_set))},
      {"uses_pseudo", group.uses_pseudo},
      {"seed", group.config.seed},
      {"group_map", group.group_map},
      {"train_config", TrainConfigToJson(group.config)},
      {"fold_assignment", folds},
      {"members", members}};
  const auto path = dir / "manifest.json";
  csv::WriteText(path, manifest.dump(2) + "\n");
  return path;
}

ModelGroup LoadModelGroup(const std::filesystem::path& manifest_path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(csv::ReadText(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kParse, manifest_path.string() + ": " + e.what());
  }
  if (j.value("format", "") != "fogtype-group" || j.value("version", 0) != 1) {
    Fail(ErrorKind::kIntegrity, manifest_path.string() + ": not a group manifest");
  }
  const auto dir = manifest_path.parent_path();
  ModelGroup group;
  group.group_id = j.at("group_id").get<std::string>();
  group.domain = ParseDomain(j.at("domain").get<std::string>());
  group.feature_set = ParseFeatureSet(j.at("feature_set").get<std::string>());
  group.uses_pseudo = j.at("uses_pseudo").get<bool>();
  group.group_map = j.at("group_map").get<double>();
  group.config = TrainConfigFromJson(j.at("train_config"));
  for (const auto& [trial, fold] : j.at("fold_assignment").items()) {
    group.fold_assignment[trial] = fold.get<std::size_t>();
  }
  std::string fingerprint;
  for (const auto& m : j.at("members")) {
    GroupMember member{
        LoadCheckpoint(dir / m.at("checkpoint").get<std::string>(), fingerprint),
        m.at("fold").get<std::size_t>(),
        m.at("seed").get<std::uint64_t>(),
        m.at("validation_trials").get<std::vector<std::string>>(),
        m.at("oof_map").get<double>(),
        m.at("best_epoch").get<std::size_t>(),
        m.at("best_val_mae").get<double>(),
        {}};
    fingerprint = member.checkpoint.fingerprint;
    group.members.push_back(std::move(member));
  }
  return group;
}

}  // namespace fog
