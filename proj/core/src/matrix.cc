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

#include "blankreg/matrix.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "blankreg/errors.h"

namespace blankreg {

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw InvalidArgument("Matrix: negative dimension");
  data_.assign(static_cast<size_t>(rows) * static_cast<size_t>(cols), fill);
}

Matrix::Matrix(int rows, int cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  if (rows < 0 || cols < 0) throw InvalidArgument("Matrix: negative dimension");
  if (data_.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols)) {
    throw InvalidArgument("Matrix: value count does not match dimensions");
  }
}

DenseGrid::DenseGrid(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 2) {
    throw InvalidArgument("DenseGrid: need at least one frame and two columns");
  }
  for (double v : values_.data()) {
    if (!std::isfinite(v)) throw InvalidArgument("DenseGrid: non-finite entry");
  }
}

DenseGrid LogSoftmax(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (int t = 0; t < logits.rows(); ++t) {
    auto row = logits.Row(t);
    for (double v : row) {
      if (!std::isfinite(v)) throw InvalidArgument("LogSoftmax: non-finite logit");
    }
    double max = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (double v : row) sum += std::exp(v - max);
    double log_norm = max + std::log(sum);
    auto dst = out.Row(t);
    for (size_t k = 0; k < row.size(); ++k) dst[k] = row[k] - log_norm;
  }
  return DenseGrid(std::move(out));
}

Matrix Exp(const Matrix& m) {
  Matrix out = m;
  for (double& v : out.data()) v = std::exp(v);
  return out;
}

}  // namespace blankreg
