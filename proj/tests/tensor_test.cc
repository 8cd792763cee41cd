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

#include <gtest/gtest.h>

#include "fog/random.h"
#include "fog/tensor.h"
#include "test_util.h"

namespace fog {
namespace {

using ::fog::testing::ThrowsKind;

Tensor Random(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Tensor t(rows, cols);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.Normal();
  return t;
}

Tensor Transpose(const Tensor& x) {
  Tensor t(x.cols(), x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) t(c, r) = x(r, c);
  }
  return t;
}

Tensor NaiveProduct(const Tensor& a, const Tensor& b) {
  Tensor out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      for (std::size_t k = 0; k < a.cols(); ++k) out(i, j) += a(i, k) * b(k, j);
    }
  }
  return out;
}

void ExpectNear(const Tensor& a, const Tensor& b) {
  ASSERT_TRUE(a.SameShape(b)) << a.ShapeString() << " vs " << b.ShapeString();
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(Tensor, ShapesAndAccessors) {
  const Tensor m = Tensor::FromRows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 3u);
  EXPECT_EQ(m(1, 2), 6.0);
  EXPECT_EQ(m.ShapeString(), "[2x3]");
  const Tensor v = Tensor::Vector(4, 1.5);
  EXPECT_EQ(v.rank(), 1u);
  EXPECT_EQ(v.rows(), 1u);
  EXPECT_EQ(v.cols(), 4u);
  EXPECT_TRUE(v.AllFinite());
}

TEST(Tensor, ProductsMatchNaiveLoops) {
  const Tensor a = Random(4, 5, 1), b = Random(5, 3, 2), c = Random(4, 3, 3);
  ExpectNear(MatMul(a, b), NaiveProduct(a, b));
  ExpectNear(MatMulTransA(a, c), NaiveProduct(Transpose(a), c));
  ExpectNear(MatMulTransB(c, Random(6, 3, 4)), NaiveProduct(c, Transpose(Random(6, 3, 4))));
  Tensor acc = Random(5, 3, 5);
  const Tensor before = acc;
  AddMatMulTransA(a, c, acc);
  ExpectNear(acc, Add(before, NaiveProduct(Transpose(a), c)));
  EXPECT_TRUE(ThrowsKind([&] { MatMul(a, a); }, ErrorKind::kShape));
}

TEST(Tensor, ColumnSlicesAndReversal) {
  const Tensor m = Tensor::FromRows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(SliceCols(m, 1, 2), Tensor::FromRows({{2, 3}, {5, 6}}));
  Tensor d(2, 3);
  SetCols(d, 1, Tensor::FromRows({{7, 8}, {9, 10}}));
  EXPECT_EQ(d, Tensor::FromRows({{0, 7, 8}, {0, 9, 10}}));
  AddCols(d, 0, Tensor::FromRows({{1}, {1}}));
  EXPECT_EQ(d, Tensor::FromRows({{1, 7, 8}, {1, 9, 10}}));
  EXPECT_EQ(ReverseRows(m), Tensor::FromRows({{4, 5, 6}, {1, 2, 3}}));
}

}  // namespace
}  // namespace fog
