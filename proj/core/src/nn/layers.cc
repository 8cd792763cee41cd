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

#include "fog/nn/layers.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fog/error.h"

namespace fog::nn {
namespace {

void RequireCols(const Tensor& x, std::size_t cols, const char* what) {
  if (x.rank() != 2 || x.cols() != cols) {
    Fail(ErrorKind::kShape, std::string(what) + ": expected " +
                                std::to_string(cols) + " columns, got " +
                                x.ShapeString());
  }
}

}  // namespace

void ZeroGrad(const ParameterRefs& params) {
  for (Parameter* p : params) p->grad.Fill(0.0);
}

std::size_t CountParameters(const ParameterRefs& params) {
  std::size_t total = 0;
  for (const Parameter* p : params) total += p->value.size();
  return total;
}

void GlorotUniform(Tensor& weight, std::size_t fan_in, std::size_t fan_out,
                   Rng& rng) {
  const double limit =
      std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& w : weight.values()) w = rng.Uniform(-limit, limit);
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// --- Dense ------------------------------------------------------------------

Dense::Dense(const std::string& name, std::size_t in, std::size_t out)
    : weight_(name + ".weight", Tensor(in, out)),
      bias_(name + ".bias", Tensor::Vector(out)) {}

void Dense::Init(Rng& rng) {
  GlorotUniform(weight_.value, in_features(), out_features(), rng);
  bias_.value.Fill(0.0);
}

Tensor Dense::Forward(const Tensor& x, Cache* cache) const {
  RequireCols(x, in_features(), "dense");
  Tensor y = MatMul(x, weight_.value);
  for (std::size_t r = 0; r < y.rows(); ++r) {
    auto row = y.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += bias_.value[c];
  }
  if (cache) cache->input = x;
  return y;
}

Tensor Dense::Backward(const Tensor& dy, const Cache& cache) {
  RequireCols(dy, out_features(), "dense backward");
  AddMatMulTransA(cache.input, dy, weight_.grad);
  for (std::size_t r = 0; r < dy.rows(); ++r) {
    auto row = dy.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) bias_.grad[c] += row[c];
  }
  return MatMulTransB(dy, weight_.value);
}

// --- LayerNorm --------------------------------------------------------------

LayerNorm::LayerNorm(const std::string& name, std::size_t dim, double eps)
    : gain_(name + ".gain", Tensor::Vector(dim, 1.0)),
      shift_(name + ".shift", Tensor::Vector(dim, 0.0)),
      eps_(eps) {}

Tensor LayerNorm::Forward(const Tensor& x, Cache* cache) const {
  const std::size_t d = gain_.value.size();
  RequireCols(x, d, "layer norm");
  Tensor y(x.rows(), d);
  if (cache) {
    cache->normalized = Tensor(x.rows(), d);
    cache->inv_std.assign(x.rows(), 0.0);
  }
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto in = x.row(r);
    double mean = 0.0;
    for (double v : in) mean += v;
    mean /= static_cast<double>(d);
    double var = 0.0;
    for (double v : in) var += (v - mean) * (v - mean);
    var /= static_cast<double>(d);
    const double inv_std = 1.0 / std::sqrt(var + eps_);
    auto out = y.row(r);
    for (std::size_t c = 0; c < d; ++c) {
      const double normalized = (in[c] - mean) * inv_std;
      out[c] = gain_.value[c] * normalized + shift_.value[c];
      if (cache) cache->normalized(r, c) = normalized;
    }
    if (cache) cache->inv_std[r] = inv_std;
  }
  return y;
}

Tensor LayerNorm::Backward(const Tensor& dy, const Cache& cache) {
  const std::size_t d = gain_.value.size();
  RequireCols(dy, d, "layer norm backward");
  Tensor dx(dy.rows(), d);
  std::vector<double> dnorm(d);
  for (std::size_t r = 0; r < dy.rows(); ++r) {
    auto g = dy.row(r);
    auto xhat = cache.normalized.row(r);
    double sum = 0.0, dot = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      gain_.grad[c] += g[c] * xhat[c];
      shift_.grad[c] += g[c];
      dnorm[c] = g[c] * gain_.value[c];
      sum += dnorm[c];
      dot += dnorm[c] * xhat[c];
    }
    const double scale = cache.inv_std[r] / static_cast<double>(d);
    auto out = dx.row(r);
    for (std::size_t c = 0; c < d; ++c) {
      out[c] = scale * (static_cast<double>(d) * dnorm[c] - sum - xhat[c] * dot);
    }
  }
  return dx;
}

// --- Dropout ----------------------------------------------------------------

Dropout::Dropout(double rate) : rate_(rate) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    Fail(ErrorKind::kValidation, "dropout rate must be in [0, 1)");
  }
}

Tensor Dropout::Forward(const Tensor& x, Mode mode, Rng* rng,
                        Cache* cache) const {
  if (cache) cache->mask = Tensor();
  if (mode == Mode::kEval || rate_ == 0.0) return x;
  if (rng == nullptr) Fail(ErrorKind::kValidation, "train-mode dropout needs an Rng");
  const double keep_scale = 1.0 / (1.0 - rate_);
  Tensor mask(x.shape());
  Tensor y = x;
  for (std::size_t i = 0; i < y.size(); ++i) {
    mask[i] = rng->Uniform() < rate_ ? 0.0 : keep_scale;
    y[i] *= mask[i];
  }
  if (cache) cache->mask = std::move(mask);
  return y;
}

Tensor Dropout::Backward(const Tensor& dy, const Cache& cache) const {
  if (cache.mask.empty()) return dy;
  Tensor dx = dy;
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] *= cache.mask[i];
  return dx;
}

Tensor DropoutForward(const Tensor& x, double rate, Mode mode,
                      std::uint64_t seed) {
  Rng rng(seed);
  return Dropout(rate).Forward(x, mode, &rng);
}

// --- MultiHeadAttention -----------------------------------------------------

MultiHeadAttention::MultiHeadAttention(const std::string& name,
                                       std::size_t model_dim,
                                       std::size_t num_heads,
                                       std::size_t head_dim)
    : query_(name + ".query", model_dim, num_heads * head_dim),
      key_(name + ".key", model_dim, num_heads * head_dim),
      value_(name + ".value", model_dim, num_heads * head_dim),
      output_(name + ".output", num_heads * head_dim, model_dim),
      num_heads_(num_heads),
      head_dim_(head_dim) {
  if (num_heads == 0 || head_dim == 0) {
    Fail(ErrorKind::kValidation, "attention needs >= 1 head of width >= 1");
  }
}

void MultiHeadAttention::Init(Rng& rng) {
  query_.Init(rng);
  key_.Init(rng);
  value_.Init(rng);
  output_.Init(rng);
}

ParameterRefs MultiHeadAttention::Parameters() {
  ParameterRefs params;
  for (Dense* d : {&query_, &key_, &value_, &output_}) {
    auto p = d->Parameters();
    params.insert(params.end(), p.begin(), p.end());
  }
  return params;
}

Tensor MultiHeadAttention::Forward(const Tensor& x, Cache* cache) const {
  Cache local;
  Cache& c = cache ? *cache : local;
  c.q = query_.Forward(x, &c.query);
  c.k = key_.Forward(x, &c.key);
  c.v = value_.Forward(x, &c.value);
  const std::size_t steps = x.rows();
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim_));
  c.concat = Tensor(steps, num_heads_ * head_dim_);
  c.weights.assign(num_heads_, Tensor());
  for (std::size_t h = 0; h < num_heads_; ++h) {
    const std::size_t offset = h * head_dim_;
    const Tensor qh = SliceCols(c.q, offset, head_dim_);
    const Tensor kh = SliceCols(c.k, offset, head_dim_);
    const Tensor vh = SliceCols(c.v, offset, head_dim_);
    Tensor scores = MatMulTransB(qh, kh);
    for (std::size_t i = 0; i < steps; ++i) {
      auto row = scores.row(i);
      double max_score = -std::numeric_limits<double>::infinity();
      for (double& s : row) {
        s *= scale;
        max_score = std::max(max_score, s);
      }
      double total = 0.0;
      for (double& s : row) {
        s = std::exp(s - max_score);
        total += s;
      }
      for (double& s : row) s /= total;
    }
    SetCols(c.concat, offset, MatMul(scores, vh));
    c.weights[h] = std::move(scores);
  }
  return output_.Forward(c.concat, &c.output);
}

Tensor MultiHeadAttention::Backward(const Tensor& dy, const Cache& cache) {
  const Tensor dconcat = output_.Backward(dy, cache.output);
  const std::size_t steps = dy.rows();
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim_));
  Tensor dq(steps, num_heads_ * head_dim_);
  Tensor dk(steps, num_heads_ * head_dim_);
  Tensor dv(steps, num_heads_ * head_dim_);
  for (std::size_t h = 0; h < num_heads_; ++h) {
    const std::size_t offset = h * head_dim_;
    const Tensor& a = cache.weights[h];
    const Tensor doh = SliceCols(dconcat, offset, head_dim_);
    const Tensor qh = SliceCols(cache.q, offset, head_dim_);
    const Tensor kh = SliceCols(cache.k, offset, head_dim_);
    const Tensor vh = SliceCols(cache.v, offset, head_dim_);
    SetCols(dv, offset, MatMulTransA(a, doh));
    Tensor ds = MatMulTransB(doh, vh);  // dA
    for (std::size_t i = 0; i < steps; ++i) {
      auto da = ds.row(i);
      auto ai = a.row(i);
      double dot = 0.0;
      for (std::size_t j = 0; j < steps; ++j) dot += ai[j] * da[j];
      for (std::size_t j = 0; j < steps; ++j) {
        da[j] = ai[j] * (da[j] - dot) * scale;
      }
    }
    SetCols(dq, offset, MatMul(ds, kh));
    SetCols(dk, offset, MatMulTransA(ds, qh));
  }
  Tensor dx = query_.Backward(dq, cache.query);
  AddInPlace(dx, key_.Backward(dk, cache.key));
  AddInPlace(dx, value_.Backward(dv, cache.value));
  return dx;
}

// --- LSTM -------------------------------------------------------------------

LstmCell::LstmCell(const std::string& name, std::size_t input_dim,
                   std::size_t hidden)
    : input_weight_(name + ".input_weight", Tensor(input_dim, 4 * hidden)),
      recurrent_weight_(name + ".recurrent_weight", Tensor(hidden, 4 * hidden)),
      bias_(name + ".bias", Tensor::Vector(4 * hidden)) {
  if (hidden == 0) Fail(ErrorKind::kValidation, "LSTM hidden size must be >= 1");
}

void LstmCell::Init(Rng& rng) {
  const std::size_t h = hidden();
  GlorotUniform(input_weight_.value, input_dim(), 4 * h, rng);
  GlorotUniform(recurrent_weight_.value, h, 4 * h, rng);
  bias_.value.Fill(0.0);
  for (std::size_t j = h; j < 2 * h; ++j) bias_.value[j] = 1.0;
}

void LstmCell::Step(std::span<const double> x, std::span<const double> h_prev,
                    std::span<const double> c_prev, std::span<double> h,
                    std::span<double> c, Cache* cache) const {
  const std::size_t hid = hidden();
  const std::size_t width = 4 * hid;
  if (x.size() != input_dim() || h_prev.size() != hid || c_prev.size() != hid) {
    Fail(ErrorKind::kShape, "LSTM step: input/state size mismatch");
  }
  std::vector<double> z(bias_.value.values().begin(), bias_.value.values().end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    const double* w = input_weight_.value.data() + i * width;
    for (std::size_t j = 0; j < width; ++j) z[j] += x[i] * w[j];
  }
  for (std::size_t i = 0; i < hid; ++i) {
    if (h_prev[i] == 0.0) continue;
    const double* w = recurrent_weight_.value.data() + i * width;
    for (std::size_t j = 0; j < width; ++j) z[j] += h_prev[i] * w[j];
  }
  for (std::size_t j = 0; j < hid; ++j) {
    z[j] = Sigmoid(z[j]);                      // input
    z[hid + j] = Sigmoid(z[hid + j]);          // forget
    z[2 * hid + j] = std::tanh(z[2 * hid + j]);  // candidate
    z[3 * hid + j] = Sigmoid(z[3 * hid + j]);  // output
  }
  std::vector<double> tanh_c(hid);
  for (std::size_t j = 0; j < hid; ++j) {
    c[j] = z[hid + j] * c_prev[j] + z[j] * z[2 * hid + j];
    tanh_c[j] = std::tanh(c[j]);
    h[j] = z[3 * hid + j] * tanh_c[j];
  }
  if (cache) {
    cache->x.assign(x.begin(), x.end());
    cache->h_prev.assign(h_prev.begin(), h_prev.end());
    cache->c_prev.assign(c_prev.begin(), c_prev.end());
    cache->gates = std::move(z);
    cache->c.assign(c.begin(), c.end());
    cache->tanh_c = std::move(tanh_c);
  }
}

void LstmCell::StepBackward(const Cache& cache, std::span<const double> dh,
                            std::span<const double> dc, std::span<double> dx,
                            std::span<double> dh_prev,
                            std::span<double> dc_prev) {
  const std::size_t hid = hidden();
  const std::size_t width = 4 * hid;
  const auto& g = cache.gates;
  std::vector<double> dz(width);
  for (std::size_t j = 0; j < hid; ++j) {
    const double i_gate = g[j], f_gate = g[hid + j], cand = g[2 * hid + j],
                 o_gate = g[3 * hid + j];
    const double tc = cache.tanh_c[j];
    const double dc_total = dc[j] + dh[j] * o_gate * (1.0 - tc * tc);
    dz[j] = dc_total * cand * i_gate * (1.0 - i_gate);
    dz[hid + j] = dc_total * cache.c_prev[j] * f_gate * (1.0 - f_gate);
    dz[2 * hid + j] = dc_total * i_gate * (1.0 - cand * cand);
    dz[3 * hid + j] = dh[j] * tc * o_gate * (1.0 - o_gate);
    dc_prev[j] = dc_total * f_gate;
  }
  for (std::size_t j = 0; j < width; ++j) bias_.grad[j] += dz[j];
  for (std::size_t i = 0; i < cache.x.size(); ++i) {
    const double* w = input_weight_.value.data() + i * width;
    double* gw = input_weight_.grad.data() + i * width;
    double sum = 0.0;
    for (std::size_t j = 0; j < width; ++j) {
      gw[j] += cache.x[i] * dz[j];
      sum += w[j] * dz[j];
    }
    dx[i] = sum;
  }
  for (std::size_t i = 0; i < hid; ++i) {
    const double* w = recurrent_weight_.value.data() + i * width;
    double* gw = recurrent_weight_.grad.data() + i * width;
    double sum = 0.0;
    for (std::size_t j = 0; j < width; ++j) {
      gw[j] += cache.h_prev[i] * dz[j];
      sum += w[j] * dz[j];
    }
    dh_prev[i] = sum;
  }
}

Lstm::Lstm(const std::string& name, std::size_t input_dim, std::size_t hidden)
    : cell_(name, input_dim, hidden) {}

Tensor Lstm::Forward(const Tensor& x, Cache* cache) const {
  RequireCols(x, cell_.input_dim(), "lstm");
  const std::size_t hid = cell_.hidden();
  Tensor out(x.rows(), hid);
  std::vector<double> h(hid, 0.0), c(hid, 0.0), h_next(hid), c_next(hid);
  if (cache) cache->steps.assign(x.rows(), LstmCell::Cache{});
  for (std::size_t t = 0; t < x.rows(); ++t) {
    cell_.Step(x.row(t), h, c, h_next, c_next,
               cache ? &cache->steps[t] : nullptr);
    std::swap(h, h_next);
    std::swap(c, c_next);
    std::copy(h.begin(), h.end(), out.row(t).begin());
  }
  return out;
}

Tensor Lstm::Backward(const Tensor& dy, const Cache& cache) {
  const std::size_t hid = cell_.hidden();
  RequireCols(dy, hid, "lstm backward");
  Tensor dx(dy.rows(), cell_.input_dim());
  std::vector<double> dh(hid, 0.0), dc(hid, 0.0), dh_prev(hid), dc_prev(hid);
  for (std::size_t t = dy.rows(); t-- > 0;) {
    auto grad_out = dy.row(t);
    for (std::size_t j = 0; j < hid; ++j) dh[j] += grad_out[j];
    cell_.StepBackward(cache.steps[t], dh, dc, dx.row(t), dh_prev, dc_prev);
    std::swap(dh, dh_prev);
    std::swap(dc, dc_prev);
  }
  return dx;
}

BiLstm::BiLstm(const std::string& name, std::size_t input_dim,
               std::size_t hidden_per_direction)
    : forward_(name + ".forward", input_dim, hidden_per_direction),
      backward_(name + ".backward", input_dim, hidden_per_direction) {}

void BiLstm::Init(Rng& rng) {
  forward_.Init(rng);
  backward_.Init(rng);
}

ParameterRefs BiLstm::Parameters() {
  ParameterRefs params = forward_.Parameters();
  auto back = backward_.Parameters();
  params.insert(params.end(), back.begin(), back.end());
  return params;
}

Tensor BiLstm::Forward(const Tensor& x, Cache* cache) const {
  const Tensor fwd = forward_.Forward(x, cache ? &cache->forward : nullptr);
  const Tensor bwd = ReverseRows(
      backward_.Forward(ReverseRows(x), cache ? &cache->backward : nullptr));
  Tensor out(x.rows(), output_dim());
  SetCols(out, 0, fwd);
  SetCols(out, fwd.cols(), bwd);
  return out;
}

Tensor BiLstm::Backward(const Tensor& dy, const Cache& cache) {
  const std::size_t hid = forward_.hidden();
  Tensor dx = forward_.Backward(SliceCols(dy, 0, hid), cache.forward);
  AddInPlace(dx, ReverseRows(backward_.Backward(
                     ReverseRows(SliceCols(dy, hid, hid)), cache.backward)));
  return dx;
}

// --- Loss -------------------------------------------------------------------

double BinaryCrossEntropyWithLogits(const Tensor& logits, const Tensor& targets,
                                    std::span<const double> row_weights,
                                    Tensor* dlogits) {
  if (!logits.SameShape(targets)) {
    Fail(ErrorKind::kShape, "BCE: logits " + logits.ShapeString() +
                                " vs targets " + targets.ShapeString());
  }
  if (!row_weights.empty() && row_weights.size() != logits.rows()) {
    Fail(ErrorKind::kShape, "BCE: one weight per row required");
  }
  const std::size_t cols = logits.cols();
  double weight_total = 0.0;
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    weight_total += (row_weights.empty() ? 1.0 : row_weights[r]) *
                    static_cast<double>(cols);
  }
  if (dlogits) *dlogits = Tensor(logits.shape());
  if (weight_total <= 0.0) return 0.0;
  double loss = 0.0;
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const double w = row_weights.empty() ? 1.0 : row_weights[r];
    if (w == 0.0) continue;
    for (std::size_t c = 0; c < cols; ++c) {
      const double z = logits(r, c);
      const double y = targets(r, c);
      // log(1 + e^z) - y z, written to avoid overflow.
      loss += w * (std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z))));
      if (dlogits) (*dlogits)(r, c) = w * (Sigmoid(z) - y) / weight_total;
    }
  }
  return loss / weight_total;
}

double BinaryCrossEntropy(const Tensor& probabilities, const Tensor& targets) {
  if (!probabilities.SameShape(targets) || probabilities.empty()) {
    Fail(ErrorKind::kShape, "BCE: shape mismatch or empty input");
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double p = std::clamp(probabilities[i], 1e-7, 1.0 - 1e-7);
    loss -= targets[i] * std::log(p) + (1.0 - targets[i]) * std::log(1.0 - p);
  }
  return loss / static_cast<double>(probabilities.size());
}

}  // namespace fog::nn
