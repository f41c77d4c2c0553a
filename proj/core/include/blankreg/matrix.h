// Copyright 2026 The blankreg Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BLANKREG_MATRIX_H_
#define BLANKREG_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace blankreg {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);
  Matrix(int rows, int cols, std::vector<double> values);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(int r, int c) { return data_[Index(r, c)]; }
  double operator()(int r, int c) const { return data_[Index(r, c)]; }

  std::span<double> Row(int r) { return {data_.data() + Index(r, 0), static_cast<size_t>(cols_)}; }
  std::span<const double> Row(int r) const {
    return {data_.data() + Index(r, 0), static_cast<size_t>(cols_)};
  }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  size_t Index(int r, int c) const {
    return static_cast<size_t>(r) * static_cast<size_t>(cols_) + static_cast<size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Per-frame log-probabilities: row t is frame t, column 0 is blank and
// columns 1..V are vocabulary symbols. All entries finite, both dimensions
// positive; rows need not be normalized.
class DenseGrid {
 public:
  // Throws InvalidArgument on empty dimensions or non-finite entries.
  explicit DenseGrid(Matrix values);

  int num_frames() const { return values_.rows(); }
  int num_columns() const { return values_.cols(); }
  int vocab_size() const { return values_.cols() - 1; }

  double operator()(int t, int k) const { return values_(t, k); }
  std::span<const double> Row(int t) const { return values_.Row(t); }
  const Matrix& values() const { return values_; }

 private:
  Matrix values_;
};

// Row-wise log-softmax with max shifting. Throws InvalidArgument on
// non-finite input.
DenseGrid LogSoftmax(const Matrix& logits);

// exp() of every entry.
Matrix Exp(const Matrix& m);

}  // namespace blankreg

#endif  // BLANKREG_MATRIX_H_
