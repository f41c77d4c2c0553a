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

#ifndef BLANKREG_BLANK_SKIP_H_
#define BLANKREG_BLANK_SKIP_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "blankreg/errors.h"

namespace blankreg {

// Per-frame skip decisions for one utterance.
struct SkipMask {
  std::vector<bool> skip;
  double threshold = 0.0;

  size_t NumSkipped() const;
  // NumSkipped() / T; zero for an empty mask.
  double ReductionRatio() const;
};

// A frame is skipped when its blank probability is strictly above `beta`.
// Throws InvalidArgument for probabilities outside [0, 1] or beta outside
// (0, 1).
SkipMask ClassifyBlankFrames(std::span<const double> blank_probs, double beta);

template <typename Frame>
struct RetainedFrame {
  size_t index;
  Frame frame;
};

// Frames whose mask entry is false, in their original order and tagged with
// their original indices. Throws InvalidArgument on a length mismatch.
template <typename Frame>
std::vector<RetainedFrame<Frame>> ApplySkip(std::span<const Frame> frames, const SkipMask& mask) {
  if (frames.size() != mask.skip.size()) {
    throw InvalidArgument("ApplySkip: frame count does not match mask length");
  }
  std::vector<RetainedFrame<Frame>> kept;
  for (size_t t = 0; t < frames.size(); ++t) {
    if (!mask.skip[t]) kept.push_back({t, frames[t]});
  }
  return kept;
}

// Indices of retained frames only.
std::vector<size_t> RetainedIndices(const SkipMask& mask);

// 1 - S/T. Throws InvalidArgument unless 0 <= S <= T and T > 0.
double GammaMax(long token_count, long frame_count);

// Reference value measured on the LibriSpeech test sets (BPE-500 units,
// 40 ms frames). Reported for comparison only.
inline constexpr double kLibriSpeechGammaMax = 0.7861;

// Decoding-threshold grid used for the WER/reduction trade-off curves.
inline constexpr double kDefaultSweepBetas[] = {0.8, 0.85, 0.9, 0.95, 0.99, 0.999};

struct SweepRow {
  double beta = 0.0;
  // sum of skipped frames / sum of frames over the corpus.
  double ratio = 0.0;
  double gamma_max = 0.0;
};

// One row per beta. Throws InvalidArgument on an empty corpus, mismatched
// sizes, or betas outside (0, 1).
std::vector<SweepRow> SweepThresholds(const std::vector<std::vector<double>>& blank_probs,
                                      const std::vector<long>& label_counts,
                                      std::span<const double> betas);

// "beta,ratio,gamma_max" header plus one line per row.
void WriteSweepCsv(const std::vector<SweepRow>& rows, std::ostream& os);

}  // namespace blankreg

#endif  // BLANKREG_BLANK_SKIP_H_
