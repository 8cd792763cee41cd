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

#ifndef FOG_TENSOR_H_
#define FOG_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fog {

// Dense row-major tensor of doubles. Most of the library works with rank-2
// (rows x cols) tensors; biases and gains are rank-1.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
  Tensor(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Tensor Vector(std::size_t n, double fill = 0.0);
  static Tensor FromRows(
      std::initializer_list<std::initializer_list<double>> rows);
  static Tensor FromVector(std::vector<double> values);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  // Rank-2 accessors. A rank-1 tensor of length n behaves as 1 x n.
  std::size_t rows() const;
  std::size_t cols() const;

  double& operator()(std::size_t r, std::size_t c) {
    return values_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> row(std::size_t r) {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  void Fill(double value);
  bool AllFinite() const;
  bool SameShape(const Tensor& other) const { return shape_ == other.shape_; }
  std::string ShapeString() const;

  friend bool operator==(const Tensor& a, const Tensor& b) = default;

 private:
  std::vector<std::size_t> shape_;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// a (n x k) * b (k x m).
Tensor MatMul(const Tensor& a, const Tensor& b);
// a^T * b for a (k x n), b (k x m).
Tensor MatMulTransA(const Tensor& a, const Tensor& b);
// a * b^T for a (n x k), b (m x k).
Tensor MatMulTransB(const Tensor& a, const Tensor& b);

// out += a^T * b, used to accumulate weight gradients.
void AddMatMulTransA(const Tensor& a, const Tensor& b, Tensor& out);

void AddInPlace(Tensor& target, const Tensor& addend);
Tensor Add(const Tensor& a, const Tensor& b);

// Column slice [begin, begin + width) of a rank-2 tensor.
Tensor SliceCols(const Tensor& x, std::size_t begin, std::size_t width);
// Writes src into columns [begin, begin + src.cols()) of dst.
void SetCols(Tensor& dst, std::size_t begin, const Tensor& src);
void AddCols(Tensor& dst, std::size_t begin, const Tensor& src);

// Row order reversed.
Tensor ReverseRows(const Tensor& x);

}  // namespace fog

#endif  // FOG_TENSOR_H_
