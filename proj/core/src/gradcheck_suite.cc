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

#include "fog/gradcheck_suite.h"

#include <algorithm>
#include <functional>
#include <limits>

#include "fog/nn/gradcheck.h"
#include "fog/nn/layers.h"
#include "fog/random.h"

namespace fog {
namespace {

constexpr double kLayerTolerance = 1e-5;
constexpr double kModelTolerance = 1e-4;
constexpr double kEps = 1e-4;
// Targets whose exact gradient is identically zero are compared in absolute
// terms; a relative error against a zero gradient only measures roundoff.
constexpr double kZeroGradientTolerance = 1e-8;

Tensor RandomTensor(std::vector<std::size_t> shape, Rng& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = scale * rng.Normal();
  return t;
}

void Randomize(const nn::ParameterRefs& params, Rng& rng, double scale) {
  for (auto* p : params) {
    for (double& v : p->value.values()) v = scale * rng.Normal();
  }
}

double Weighted(const Tensor& y, const Tensor& g) {
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) sum += y[i] * g[i];
  return sum;
}

void AddParameterTargets(const nn::ParameterRefs& params,
                         std::vector<nn::GradTarget>& targets) {
  for (auto* p : params) targets.push_back({p->name, &p->value, &p->grad});
}

// Attention scores are invariant to the key bias: it shifts every score of a
// query row by the same amount, which softmax cancels.
bool HasZeroGradient(const std::string& name) {
  return name.ends_with("key.bias");
}

nn::GradCheckReport Check(const std::function<double()>& loss,
                          const std::vector<nn::GradTarget>& targets) {
  std::vector<nn::GradTarget> relative, absolute;
  for (const auto& t : targets) {
    (HasZeroGradient(t.name) ? absolute : relative).push_back(t);
  }
  auto report = nn::GradientCheck(loss, relative, kEps);
  if (!absolute.empty()) {
    const auto zero = nn::GradientCheck(loss, absolute, kEps);
    report.checked += zero.checked;
    if (zero.max_absolute_error >= kZeroGradientTolerance) {
      report.max_relative_error = std::numeric_limits<double>::infinity();
      report.worst_target = zero.worst_target;
    }
  }
  return report;
}

// Runs `one_seed` for each seed and folds the reports together.
GradcheckResult Repeat(
    const std::string& name, std::size_t seeds, std::uint64_t first_seed,
    double tolerance,
    const std::function<nn::GradCheckReport(std::uint64_t)>& one_seed) {
  GradcheckResult result{name, seeds, 0, 0.0, tolerance};
  for (std::size_t i = 0; i < seeds; ++i) {
    const auto report = one_seed(first_seed + i);
    result.checked += report.checked;
    result.max_relative_error =
        std::max(result.max_relative_error, report.max_relative_error);
  }
  return result;
}

}  // namespace

GradcheckResult CheckDenseGradients(std::size_t seeds, std::uint64_t first_seed) {
  return Repeat("dense", seeds, first_seed, kLayerTolerance, [](std::uint64_t seed) {
    Rng rng(seed);
    nn::Dense layer("dense", 4, 5);
    Randomize(layer.Parameters(), rng, 0.5);
    Tensor x = RandomTensor({6, 4}, rng);
    const Tensor g = RandomTensor({6, 5}, rng);
    nn::Dense::Cache cache;
    layer.Forward(x, &cache);
    nn::ZeroGrad(layer.Parameters());
    const Tensor dx = layer.Backward(g, cache);
    std::vector<nn::GradTarget> targets{{"input", &x, &dx}};
    AddParameterTargets(layer.Parameters(), targets);
    return Check([&] { return Weighted(layer.Forward(x), g); },
                             targets);
  });
}

GradcheckResult CheckLayerNormGradients(std::size_t seeds, std::uint64_t first_seed) {
  return Repeat("layer_norm", seeds, first_seed, kLayerTolerance,
                [](std::uint64_t seed) {
                  Rng rng(seed);
                  nn::LayerNorm layer("norm", 6);
                  Randomize(layer.Parameters(), rng, 1.0);
                  Tensor x = RandomTensor({5, 6}, rng, 2.0);
                  const Tensor g = RandomTensor({5, 6}, rng);
                  nn::LayerNorm::Cache cache;
                  layer.Forward(x, &cache);
                  nn::ZeroGrad(layer.Parameters());
                  const Tensor dx = layer.Backward(g, cache);
                  std::vector<nn::GradTarget> targets{{"input", &x, &dx}};
                  AddParameterTargets(layer.Parameters(), targets);
                  return Check(
                      [&] { return Weighted(layer.Forward(x), g); }, targets);
                });
}

GradcheckResult CheckAttentionGradients(std::size_t seeds, std::uint64_t first_seed) {
  return Repeat("attention", seeds, first_seed, kLayerTolerance,
                [](std::uint64_t seed) {
                  Rng rng(seed);
                  nn::MultiHeadAttention layer("attention", 4, 2, 3);
                  Randomize(layer.Parameters(), rng, 0.5);
                  Tensor x = RandomTensor({5, 4}, rng);
                  const Tensor g = RandomTensor({5, 4}, rng);
                  nn::MultiHeadAttention::Cache cache;
                  layer.Forward(x, &cache);
                  nn::ZeroGrad(layer.Parameters());
                  const Tensor dx = layer.Backward(g, cache);
                  std::vector<nn::GradTarget> targets{{"input", &x, &dx}};
                  AddParameterTargets(layer.Parameters(), targets);
                  return Check(
                      [&] { return Weighted(layer.Forward(x), g); }, targets);
                });
}

GradcheckResult CheckLstmCellGradients(std::size_t seeds, std::uint64_t first_seed) {
  return Repeat("lstm_cell", seeds, first_seed, kLayerTolerance,
                [](std::uint64_t seed) {
                  Rng rng(seed);
                  const std::size_t d = 3, h = 4;
                  nn::LstmCell cell("cell", d, h);
                  Randomize(cell.Parameters(), rng, 0.5);
                  Tensor x = RandomTensor({d}, rng);
                  Tensor h_prev = RandomTensor({h}, rng, 0.5);
                  Tensor c_prev = RandomTensor({h}, rng, 0.5);
                  const Tensor gh = RandomTensor({h}, rng);
                  const Tensor gc = RandomTensor({h}, rng);
                  auto loss = [&] {
                    Tensor h_out({h}), c_out({h});
                    cell.Step(x.values(), h_prev.values(), c_prev.values(),
                              h_out.values(), c_out.values());
                    return Weighted(h_out, gh) + Weighted(c_out, gc);
                  };
                  Tensor h_out({h}), c_out({h});
                  nn::LstmCell::Cache cache;
                  cell.Step(x.values(), h_prev.values(), c_prev.values(),
                            h_out.values(), c_out.values(), &cache);
                  nn::ZeroGrad(cell.Parameters());
                  Tensor dx({d}), dh_prev({h}), dc_prev({h});
                  cell.StepBackward(cache, gh.values(), gc.values(), dx.values(),
                                    dh_prev.values(), dc_prev.values());
                  std::vector<nn::GradTarget> targets{{"input", &x, &dx},
                                                      {"h_prev", &h_prev, &dh_prev},
                                                      {"c_prev", &c_prev, &dc_prev}};
                  AddParameterTargets(cell.Parameters(), targets);
                  return Check(loss, targets);
                });
}

GradcheckResult CheckBiLstmGradients(std::size_t seeds, std::uint64_t first_seed) {
  return Repeat("bilstm", seeds, first_seed, kLayerTolerance, [](std::uint64_t seed) {
    Rng rng(seed);
    nn::BiLstm layer("bilstm", 3, 3);
    Randomize(layer.Parameters(), rng, 0.5);
    Tensor x = RandomTensor({6, 3}, rng);
    const Tensor g = RandomTensor({6, 6}, rng);
    nn::BiLstm::Cache cache;
    layer.Forward(x, &cache);
    nn::ZeroGrad(layer.Parameters());
    const Tensor dx = layer.Backward(g, cache);
    std::vector<nn::GradTarget> targets{{"input", &x, &dx}};
    AddParameterTargets(layer.Parameters(), targets);
    return Check([&] { return Weighted(layer.Forward(x), g); }, targets);
  });
}

GradcheckResult CheckLossHeadGradients(std::size_t seeds, std::uint64_t first_seed) {
  return Repeat("loss_head", seeds, first_seed, kLayerTolerance,
                [](std::uint64_t seed) {
                  Rng rng(seed);
                  nn::Dense head("head", 4, 3);
                  Randomize(head.Parameters(), rng, 0.7);
                  Tensor x = RandomTensor({7, 4}, rng);
                  Tensor targets_01(7, 3);
                  for (double& v : targets_01.values()) v = rng.Uniform() < 0.4;
                  std::vector<double> weights(7);
                  for (double& w : weights) w = rng.Uniform() < 0.2 ? 0.0 : 1.0;
                  weights[0] = 1.0;
                  auto loss = [&] {
                    return nn::BinaryCrossEntropyWithLogits(head.Forward(x),
                                                            targets_01, weights);
                  };
                  nn::Dense::Cache cache;
                  Tensor logits = head.Forward(x, &cache);
                  Tensor dlogits;
                  nn::BinaryCrossEntropyWithLogits(logits, targets_01, weights,
                                                   &dlogits);
                  nn::ZeroGrad(head.Parameters());
                  const Tensor dx = head.Backward(dlogits, cache);
                  std::vector<nn::GradTarget> targets{{"input", &x, &dx}};
                  AddParameterTargets(head.Parameters(), targets);
                  auto report = Check(loss, targets);
                  // The logits themselves, with the head bypassed.
                  auto direct = Check(
                      [&] {
                        return nn::BinaryCrossEntropyWithLogits(logits, targets_01,
                                                                weights);
                      },
                      {{"logits", &logits, &dlogits}});
                  report.checked += direct.checked;
                  report.max_relative_error =
                      std::max(report.max_relative_error, direct.max_relative_error);
                  return report;
                });
}

TransBiLstmConfig GradcheckToyConfig(std::size_t input_dim) {
  TransBiLstmConfig c;
  c.input_dim = input_dim;
  c.patch_len = 4;
  c.model_dim = 8;
  c.num_encoder_layers = 1;
  c.num_heads = 2;
  c.head_dim = 4;
  c.ffn_units = 8;
  c.dropout_rate = 0.1;
  c.num_bilstm_layers = 1;
  c.bilstm_output_dim = 8;
  c.num_classes = 3;
  return c;
}

GradcheckResult CheckToyModelGradients(std::size_t seeds, std::uint64_t first_seed) {
  return Repeat("toy_model", seeds, first_seed, kModelTolerance,
                [](std::uint64_t seed) {
                  Rng rng(seed);
                  TransBiLstm model = TransBiLstm::Init(GradcheckToyConfig(), seed);
                  const Tensor x = RandomTensor({14, 3}, rng);
                  Tensor labels(model.NumPatches(14), 3);
                  for (double& v : labels.values()) v = rng.Uniform() < 0.4;
                  const std::uint64_t dropout_seed = rng.NextSeed();
                  auto loss = [&] {
                    Rng dropout(dropout_seed);
                    return nn::BinaryCrossEntropyWithLogits(
                        model.ForwardLogits(x, nn::Mode::kTrain, &dropout), labels,
                        {});
                  };
                  Rng dropout(dropout_seed);
                  TransBiLstm::Cache cache;
                  const Tensor logits =
                      model.ForwardLogits(x, nn::Mode::kTrain, &dropout, &cache);
                  Tensor dlogits;
                  nn::BinaryCrossEntropyWithLogits(logits, labels, {}, &dlogits);
                  const auto params = model.Parameters();
                  nn::ZeroGrad(params);
                  model.Backward(dlogits, cache);
                  std::vector<nn::GradTarget> targets;
                  AddParameterTargets(params, targets);
                  return Check(loss, targets);
                });
}

std::vector<GradcheckResult> RunGradcheckSuite(std::size_t seeds,
                                               std::uint64_t first_seed) {
  return {CheckDenseGradients(seeds, first_seed),
          CheckLayerNormGradients(seeds, first_seed),
          CheckAttentionGradients(seeds, first_seed),
          CheckLstmCellGradients(seeds, first_seed),
          CheckBiLstmGradients(seeds, first_seed),
          CheckLossHeadGradients(seeds, first_seed),
          CheckToyModelGradients(seeds, first_seed)};
}

}  // namespace fog
