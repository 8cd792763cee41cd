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

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "fog/evaluation.h"
#include "fog/model.h"
#include "fog/nn/layers.h"
#include "fog/random.h"
#include "fog/training.h"

namespace fog {
namespace {

TransBiLstmConfig SmallConfig(std::size_t input_dim) {
  TransBiLstmConfig c;
  c.input_dim = input_dim;
  c.patch_len = 4;
  c.model_dim = 32;
  c.num_encoder_layers = 1;
  c.num_heads = 2;
  c.head_dim = 16;
  c.ffn_units = 32;
  c.num_bilstm_layers = 1;
  c.bilstm_output_dim = 32;
  return c;
}

Tensor RandomTensor(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Tensor t(rows, cols);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.Uniform() * 2.0 - 1.0;
  return t;
}

void BM_ForwardWindow(benchmark::State& state) {
  const std::size_t steps = static_cast<std::size_t>(state.range(0));
  const TransBiLstm model = TransBiLstm::Init(SmallConfig(7), 1);
  const Tensor x = RandomTensor(steps, 7, 2);
  for (auto _ : state) benchmark::DoNotOptimize(model.Forward(x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_ForwardWindow)->Arg(128)->Arg(512)->Arg(2048);

void BM_TrainStep(benchmark::State& state) {
  const std::size_t batch = static_cast<std::size_t>(state.range(0));
  TransBiLstm model = TransBiLstm::Init(SmallConfig(7), 1);
  const nn::ParameterRefs params = model.Parameters();
  AdamOptimizer adam(3e-3, 0.9, 0.999, 1e-8);
  std::vector<Tensor> inputs, targets;
  for (std::size_t b = 0; b < batch; ++b) {
    inputs.push_back(RandomTensor(128, 7, 10 + b));
    Tensor y = RandomTensor(model.NumPatches(128), 3, 100 + b);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = y[i] > 0.0;
    targets.push_back(y);
  }
  const std::vector<double> weights(model.NumPatches(128), 1.0);
  Rng rng(7);
  for (auto _ : state) {
    nn::ZeroGrad(params);
    double loss = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
      TransBiLstm::Cache cache;
      const Tensor logits = model.ForwardLogits(inputs[b], nn::Mode::kTrain, &rng, &cache);
      Tensor dlogits;
      loss += nn::BinaryCrossEntropyWithLogits(logits, targets[b], weights, &dlogits);
      model.Backward(dlogits, cache);
    }
    adam.Step(params);
    benchmark::DoNotOptimize(loss);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch));
}
BENCHMARK(BM_TrainStep)->Arg(1)->Arg(16);

void BM_AveragePrecision(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  std::vector<double> scores(n), labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = rng.Uniform();
    labels[i] = rng.Uniform() < 0.2;
  }
  labels[0] = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(AveragePrecision(scores, labels));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_AveragePrecision)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);

}  // namespace
}  // namespace fog

BENCHMARK_MAIN();
