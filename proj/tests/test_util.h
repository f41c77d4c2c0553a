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

#ifndef BLANKREG_TESTS_TEST_UTIL_H_
#define BLANKREG_TESTS_TEST_UTIL_H_

#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "blankreg/lattice.h"
#include "blankreg/matrix.h"
#include "blankreg/topology.h"

namespace blankreg::testing {

// "AB" -> {1, 2}; '-' is blank.
inline std::vector<Label> Seq(const std::string& s) {
  std::vector<Label> out;
  for (char c : s) out.push_back(c == '-' ? kBlank : static_cast<Label>(c - 'A' + 1));
  return out;
}

inline DenseGrid UniformGrid(int frames, int columns) {
  return DenseGrid(Matrix(frames, columns, std::log(1.0 / columns)));
}

inline Matrix RandomLogits(std::mt19937_64& rng, int frames, int columns, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix m(frames, columns);
  for (double& v : m.data()) v = g(rng);
  return m;
}

// Unnormalised finite scores, to exercise the machinery beyond probabilities.
inline DenseGrid RandomGrid(std::mt19937_64& rng, int frames, int columns) {
  std::uniform_real_distribution<double> u(-3.0, 1.0);
  Matrix m(frames, columns);
  for (double& v : m.data()) v = u(rng);
  return DenseGrid(std::move(m));
}

inline LabelSequence RandomLabels(std::mt19937_64& rng, int length, int vocab) {
  std::uniform_int_distribution<int> tok(1, vocab);
  LabelSequence y(length);
  for (auto& v : y) v = tok(rng);
  return y;
}

// All sequences over 1..vocab of length 0..max_len.
inline std::vector<LabelSequence> AllLabelSequences(int max_len, int vocab) {
  std::vector<LabelSequence> out{{}};
  std::vector<LabelSequence> frontier{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<LabelSequence> next;
    for (const auto& p : frontier) {
      for (Label k = 1; k <= vocab; ++k) {
        auto q = p;
        q.push_back(k);
        next.push_back(q);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

inline std::set<std::vector<Label>> PathLabelSet(const Lattice& lat) {
  std::set<std::vector<Label>> s;
  for (const auto& p : EnumeratePaths(lat)) s.insert(p.alignment);
  return s;
}

inline std::vector<TopologyVariant> ReferenceVariants() {
  return {TopologyVariant::Standard(), TopologyVariant::Soft(0.05), TopologyVariant::Soft(5.0),
          TopologyVariant::Hard(1), TopologyVariant::Hard(2)};
}

}  // namespace blankreg::testing

#endif  // BLANKREG_TESTS_TEST_UTIL_H_
