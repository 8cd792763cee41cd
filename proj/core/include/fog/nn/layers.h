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

#ifndef FOG_NN_LAYERS_H_
#define FOG_NN_LAYERS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fog/random.h"
#include "fog/tensor.h"

namespace fog::nn {

// A trainable tensor and its gradient accumulator.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string n, Tensor v)
      : name(std::move(n)), value(std::move(v)), grad(value.shape()) {}
};

using ParameterRefs = std::vector<Parameter*>;

void ZeroGrad(const ParameterRefs& params);
std::size_t CountParameters(const ParameterRefs& params);

enum class Mode { kTrain, kEval };

// Glorot-uniform fill: U(+-sqrt(6 / (fan_in + fan_out))).
void GlorotUniform(Tensor& weight, std::size_t fan_in, std::size_t fan_out,
                   Rng& rng);

double Sigmoid(double x);

// y = x W + b with W (in x out).
class Dense {
 public:
  struct Cache {
    Tensor input;
  };

  Dense() = default;
  Dense(const std::string& name, std::size_t in, std::size_t out);

  Tensor Forward(const Tensor& x, Cache* cache = nullptr) const;
  // Accumulates parameter gradients and returns dL/dx.
  Tensor Backward(const Tensor& dy, const Cache& cache);

  void Init(Rng& rng);
  ParameterRefs Parameters() { return {&weight_, &bias_}; }
  Parameter& weight() { return weight_; }
  Parameter& bias() { return bias_; }
  const Parameter& weight() const { return weight_; }
  const Parameter& bias() const { return bias_; }
  std::size_t in_features() const { return weight_.value.rows(); }
  std::size_t out_features() const { return weight_.value.cols(); }

 private:
  Parameter weight_;
  Parameter bias_;
};

// Per-row normalization (population variance) followed by gain and shift.
class LayerNorm {
 public:
  struct Cache {
    Tensor normalized;
    std::vector<double> inv_std;
  };

  LayerNorm() = default;
  LayerNorm(const std::string& name, std::size_t dim, double eps = 1e-5);

  Tensor Forward(const Tensor& x, Cache* cache = nullptr) const;
  Tensor Backward(const Tensor& dy, const Cache& cache);

  ParameterRefs Parameters() { return {&gain_, &shift_}; }
  Parameter& gain() { return gain_; }
  Parameter& shift() { return shift_; }
  double eps() const { return eps_; }

 private:
  Parameter gain_;
  Parameter shift_;
  double eps_ = 1e-5;
};

// Inverted dropout. Eval mode is the identity.
class Dropout {
 public:
  struct Cache {
    Tensor mask;  // 0 or 1 / (1 - rate); empty when the layer was a no-op
  };

  explicit Dropout(double rate = 0.0);

  Tensor Forward(const Tensor& x, Mode mode, Rng* rng,
                 Cache* cache = nullptr) const;
  Tensor Backward(const Tensor& dy, const Cache& cache) const;
  double rate() const { return rate_; }

 private:
  double rate_;
};

Tensor DropoutForward(const Tensor& x, double rate, Mode mode,
                      std::uint64_t seed);

// Unmasked multi-head self-attention with per-head width `head_dim`.
class MultiHeadAttention {
 public:
  struct Cache {
    Dense::Cache query, key, value, output;
    Tensor q, k, v;
    std::vector<Tensor> weights;  // per head, T x T, rows sum to 1
    Tensor concat;
  };

  MultiHeadAttention() = default;
  MultiHeadAttention(const std::string& name, std::size_t model_dim,
                     std::size_t num_heads, std::size_t head_dim);

  Tensor Forward(const Tensor& x, Cache* cache = nullptr) const;
  Tensor Backward(const Tensor& dy, const Cache& cache);

  void Init(Rng& rng);
  ParameterRefs Parameters();
  Dense& query() { return query_; }
  Dense& key() { return key_; }
  Dense& value() { return value_; }
  Dense& output() { return output_; }
  std::size_t num_heads() const { return num_heads_; }
  std::size_t head_dim() const { return head_dim_; }

 private:
  Dense query_, key_, value_, output_;
  std::size_t num_heads_ = 1;
  std::size_t head_dim_ = 1;
};

// One LSTM step. Gate blocks in the 4H axis are ordered input, forget,
// candidate, output.
class LstmCell {
 public:
  struct Cache {
    std::vector<double> x, h_prev, c_prev;
    std::vector<double> gates;  // activated, 4H
    std::vector<double> c, tanh_c;
  };

  LstmCell() = default;
  LstmCell(const std::string& name, std::size_t input_dim, std::size_t hidden);

  void Step(std::span<const double> x, std::span<const double> h_prev,
            std::span<const double> c_prev, std::span<double> h,
            std::span<double> c, Cache* cache = nullptr) const;
  // dh, dc: gradients w.r.t. this step's h and c. Writes dx, dh_prev and
  // dc_prev; accumulates parameter gradients.
  void StepBackward(const Cache& cache, std::span<const double> dh,
                    std::span<const double> dc, std::span<double> dx,
                    std::span<double> dh_prev, std::span<double> dc_prev);

  // Glorot weights, zero biases except the forget block set to 1.
  void Init(Rng& rng);
  ParameterRefs Parameters() {
    return {&input_weight_, &recurrent_weight_, &bias_};
  }
  Parameter& input_weight() { return input_weight_; }
  Parameter& recurrent_weight() { return recurrent_weight_; }
  Parameter& bias() { return bias_; }
  std::size_t input_dim() const { return input_weight_.value.rows(); }
  std::size_t hidden() const { return recurrent_weight_.value.rows(); }

 private:
  Parameter input_weight_;      // D x 4H
  Parameter recurrent_weight_;  // H x 4H
  Parameter bias_;              // 4H
};

// Unidirectional LSTM over the rows of x, zero initial state.
class Lstm {
 public:
  struct Cache {
    std::vector<LstmCell::Cache> steps;
  };

  Lstm() = default;
  Lstm(const std::string& name, std::size_t input_dim, std::size_t hidden);

  Tensor Forward(const Tensor& x, Cache* cache = nullptr) const;
  Tensor Backward(const Tensor& dy, const Cache& cache);

  void Init(Rng& rng) { cell_.Init(rng); }
  ParameterRefs Parameters() { return cell_.Parameters(); }
  LstmCell& cell() { return cell_; }
  std::size_t hidden() const { return cell_.hidden(); }

 private:
  LstmCell cell_;
};

// Forward and time-reversed LSTMs; output row t = [forward_h_t ; backward_h_t].
class BiLstm {
 public:
  struct Cache {
    Lstm::Cache forward, backward;
  };

  BiLstm() = default;
  BiLstm(const std::string& name, std::size_t input_dim,
         std::size_t hidden_per_direction);

  Tensor Forward(const Tensor& x, Cache* cache = nullptr) const;
  Tensor Backward(const Tensor& dy, const Cache& cache);

  void Init(Rng& rng);
  ParameterRefs Parameters();
  Lstm& forward_direction() { return forward_; }
  Lstm& backward_direction() { return backward_; }
  std::size_t output_dim() const { return 2 * forward_.hidden(); }

 private:
  Lstm forward_, backward_;
};

// Mean binary cross-entropy of sigmoid(logits) against targets over rows
// with nonzero weight. `row_weights` may be empty (all rows weigh 1). When
// `dlogits` is non-null it receives dLoss/dlogits.
double BinaryCrossEntropyWithLogits(const Tensor& logits, const Tensor& targets,
                                    std::span<const double> row_weights,
                                    Tensor* dlogits = nullptr);

// Loss of explicit probabilities, clamped to [1e-7, 1 - 1e-7].
double BinaryCrossEntropy(const Tensor& probabilities, const Tensor& targets);

}  // namespace fog::nn

#endif  // FOG_NN_LAYERS_H_
