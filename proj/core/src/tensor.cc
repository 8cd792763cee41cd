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

#include "fog/tensor.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "fog/error.h"

namespace fog {
namespace {

std::size_t Product(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

void RequireRank2(const Tensor& t, const char* what) {
  if (t.rank() != 2) {
    Fail(ErrorKind::kShape, std::string(what) + ": expected rank-2 tensor, got " +
                                t.ShapeString());
  }
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)),
      cols_(shape_.empty() ? 0 : shape_.back()),
      values_(Product(shape_), fill) {}

Tensor::Tensor(std::size_t rows, std::size_t cols, double fill)
    : Tensor(std::vector<std::size_t>{rows, cols}, fill) {}

Tensor Tensor::Vector(std::size_t n, double fill) {
  return Tensor(std::vector<std::size_t>{n}, fill);
}

Tensor Tensor::FromRows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  const std::size_t m = n == 0 ? 0 : rows.begin()->size();
  Tensor t(n, m);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != m) Fail(ErrorKind::kShape, "FromRows: ragged rows");
    std::copy(row.begin(), row.end(), t.row(r).begin());
    ++r;
  }
  return t;
}

Tensor Tensor::FromVector(std::vector<double> values) {
  Tensor t;
  t.shape_ = {values.size()};
  t.cols_ = values.size();
  t.values_ = std::move(values);
  return t;
}

std::size_t Tensor::rows() const {
  if (shape_.size() == 1) return 1;
  return shape_.empty() ? 0 : values_.size() / std::max<std::size_t>(cols_, 1);
}

std::size_t Tensor::cols() const { return cols_; }

void Tensor::Fill(double value) { std::fill(values_.begin(), values_.end(), value); }

bool Tensor::AllFinite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

std::string Tensor::ShapeString() const {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) out << 'x';
    out << shape_[i];
  }
  out << ']';
  return out.str();
}

Tensor MatMul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    Fail(ErrorKind::kShape,
         "MatMul: " + a.ShapeString() + " * " + b.ShapeString());
  }
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  Tensor out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    double* out_row = out.data() + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a(i, p);
      if (av == 0.0) continue;
      const double* b_row = b.data() + p * m;
      for (std::size_t j = 0; j < m; ++j) out_row[j] += av * b_row[j];
    }
  }
  return out;
}

Tensor MatMulTransA(const Tensor& a, const Tensor& b) {
  Tensor out(a.cols(), b.cols());
  AddMatMulTransA(a, b, out);
  return out;
}

void AddMatMulTransA(const Tensor& a, const Tensor& b, Tensor& out) {
  if (a.rows() != b.rows() || out.rows() != a.cols() || out.cols() != b.cols()) {
    Fail(ErrorKind::kShape, "MatMulTransA: " + a.ShapeString() + "^T * " +
                                b.ShapeString() + " -> " + out.ShapeString());
  }
  const std::size_t k = a.rows(), n = a.cols(), m = b.cols();
  for (std::size_t p = 0; p < k; ++p) {
    const double* a_row = a.data() + p * n;
    const double* b_row = b.data() + p * m;
    for (std::size_t i = 0; i < n; ++i) {
      const double av = a_row[i];
      if (av == 0.0) continue;
      double* out_row = out.data() + i * m;
      for (std::size_t j = 0; j < m; ++j) out_row[j] += av * b_row[j];
    }
  }
}

Tensor MatMulTransB(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.cols()) {
    Fail(ErrorKind::kShape,
         "MatMulTransB: " + a.ShapeString() + " * " + b.ShapeString() + "^T");
  }
  const std::size_t n = a.rows(), k = a.cols(), m = b.rows();
  Tensor out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const double* a_row = a.data() + i * k;
    for (std::size_t j = 0; j < m; ++j) {
      const double* b_row = b.data() + j * k;
      double sum = 0.0;
      for (std::size_t p = 0; p < k; ++p) sum += a_row[p] * b_row[p];
      out(i, j) = sum;
    }
  }
  return out;
}

void AddInPlace(Tensor& target, const Tensor& addend) {
  if (target.size() != addend.size()) {
    Fail(ErrorKind::kShape, "AddInPlace: " + target.ShapeString() + " vs " +
                                addend.ShapeString());
  }
  auto t = target.values();
  auto a = addend.values();
  for (std::size_t i = 0; i < t.size(); ++i) t[i] += a[i];
}

Tensor Add(const Tensor& a, const Tensor& b) {
  Tensor out = a;
  AddInPlace(out, b);
  return out;
}

Tensor SliceCols(const Tensor& x, std::size_t begin, std::size_t width) {
  RequireRank2(x, "SliceCols");
  if (begin + width > x.cols()) Fail(ErrorKind::kShape, "SliceCols out of range");
  Tensor out(x.rows(), width);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::copy_n(x.row(r).begin() + begin, width, out.row(r).begin());
  }
  return out;
}

void SetCols(Tensor& dst, std::size_t begin, const Tensor& src) {
  if (dst.rows() != src.rows() || begin + src.cols() > dst.cols()) {
    Fail(ErrorKind::kShape, "SetCols: " + src.ShapeString() + " into " +
                                dst.ShapeString());
  }
  for (std::size_t r = 0; r < src.rows(); ++r) {
    std::copy(src.row(r).begin(), src.row(r).end(), dst.row(r).begin() + begin);
  }
}

void AddCols(Tensor& dst, std::size_t begin, const Tensor& src) {
  if (dst.rows() != src.rows() || begin + src.cols() > dst.cols()) {
    Fail(ErrorKind::kShape, "AddCols: " + src.ShapeString() + " into " +
                                dst.ShapeString());
  }
  for (std::size_t r = 0; r < src.rows(); ++r) {
    auto d = dst.row(r);
    auto s = src.row(r);
    for (std::size_t c = 0; c < s.size(); ++c) d[begin + c] += s[c];
  }
}

Tensor ReverseRows(const Tensor& x) {
  RequireRank2(x, "ReverseRows");
  Tensor out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto src = x.row(x.rows() - 1 - r);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace fog
