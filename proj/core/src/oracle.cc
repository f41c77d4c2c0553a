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

#include "blankreg/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blankreg/errors.h"

namespace blankreg {

namespace {

// Longest run of one repeated non-blank symbol.
int LongestNonBlankRun(const std::vector<Label>& pi) {
  int longest = 0;
  int run = 0;
  for (size_t t = 0; t < pi.size(); ++t) {
    if (pi[t] == kBlank) {
      run = 0;
    } else {
      run = (t > 0 && pi[t] == pi[t - 1]) ? run + 1 : 1;
    }
    longest = std::max(longest, run);
  }
  return longest;
}

}  // namespace

std::vector<std::vector<Label>> EnumerateAlignments(const LabelSequence& labels, int num_frames,
                                                    int vocab_size,
                                                    const TopologyVariant& variant) {
  variant.Validate();
  if (num_frames > kMaxOracleFrames || vocab_size > kMaxOracleVocab) {
    throw SizeGuardExceeded("EnumerateAlignments: needs T <= " + std::to_string(kMaxOracleFrames) +
                            " and V <= " + std::to_string(kMaxOracleVocab) + ", got T=" +
                            std::to_string(num_frames) + " V=" + std::to_string(vocab_size));
  }
  if (num_frames < 0 || vocab_size < 1) throw InvalidArgument("EnumerateAlignments: bad sizes");

  std::vector<std::vector<Label>> out;
  std::vector<Label> pi(num_frames, kBlank);
  while (true) {
    if (CollapseCtc(pi) == labels &&
        (variant.kind != TopologyVariant::Kind::kHard || LongestNonBlankRun(pi) <= variant.k)) {
      out.push_back(pi);
    }
    // Odometer increment, last frame fastest, gives lexicographic order.
    int t = num_frames - 1;
    while (t >= 0 && pi[t] == vocab_size) pi[t--] = kBlank;
    if (t < 0) break;
    ++pi[t];
  }
  return out;
}

int CountNonBlankRepeats(const std::vector<Label>& alignment) {
  int n = 0;
  for (size_t t = 1; t < alignment.size(); ++t) {
    if (alignment[t] != kBlank && alignment[t] == alignment[t - 1]) ++n;
  }
  return n;
}

double AlignmentPenalty(const std::vector<Label>& alignment, const TopologyVariant& variant) {
  if (variant.kind != TopologyVariant::Kind::kSoft) return 0.0;
  return -variant.lambda * CountNonBlankRepeats(alignment);
}

double BruteForceLoss(const LabelSequence& labels, const DenseGrid& grid,
                      const TopologyVariant& variant) {
  auto alignments =
      EnumerateAlignments(labels, grid.num_frames(), grid.vocab_size(), variant);
  if (alignments.empty()) return std::numeric_limits<double>::infinity();
  std::vector<double> scores;
  scores.reserve(alignments.size());
  for (const auto& pi : alignments) {
    double s = AlignmentPenalty(pi, variant);
    for (int t = 0; t < grid.num_frames(); ++t) s += grid(t, pi[t]);
    scores.push_back(s);
  }
  double max = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - max);
  return -(max + std::log(sum));
}

}  // namespace blankreg
