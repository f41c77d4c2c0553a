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

#include "blankreg/blank_skip.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "blankreg/fst_io.h"

namespace blankreg {

size_t SkipMask::NumSkipped() const {
  return static_cast<size_t>(std::count(skip.begin(), skip.end(), true));
}

double SkipMask::ReductionRatio() const {
  if (skip.empty()) return 0.0;
  return static_cast<double>(NumSkipped()) / static_cast<double>(skip.size());
}

namespace {

void CheckBeta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw InvalidArgument("blank threshold must lie in (0, 1), got " + FormatDouble(beta));
  }
}

}  // namespace

SkipMask ClassifyBlankFrames(std::span<const double> blank_probs, double beta) {
  CheckBeta(beta);
  SkipMask mask;
  mask.threshold = beta;
  mask.skip.reserve(blank_probs.size());
  for (double p : blank_probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidArgument("blank probability outside [0, 1]: " + FormatDouble(p));
    }
    mask.skip.push_back(p > beta);
  }
  return mask;
}

std::vector<size_t> RetainedIndices(const SkipMask& mask) {
  std::vector<size_t> kept;
  for (size_t t = 0; t < mask.skip.size(); ++t) {
    if (!mask.skip[t]) kept.push_back(t);
  }
  return kept;
}

double GammaMax(long token_count, long frame_count) {
  if (frame_count <= 0) throw InvalidArgument("GammaMax: frame count must be positive");
  if (token_count < 0 || token_count > frame_count) {
    throw InvalidArgument("GammaMax: need 0 <= tokens <= frames");
  }
  return 1.0 - static_cast<double>(token_count) / static_cast<double>(frame_count);
}

std::vector<SweepRow> SweepThresholds(const std::vector<std::vector<double>>& blank_probs,
                                      const std::vector<long>& label_counts,
                                      std::span<const double> betas) {
  if (blank_probs.empty()) throw InvalidArgument("SweepThresholds: empty corpus");
  if (blank_probs.size() != label_counts.size()) {
    throw InvalidArgument("SweepThresholds: one label count per utterance required");
  }
  for (double b : betas) CheckBeta(b);

  long total_frames = 0;
  long total_tokens = 0;
  for (size_t i = 0; i < blank_probs.size(); ++i) {
    total_frames += static_cast<long>(blank_probs[i].size());
    total_tokens += label_counts[i];
  }
  const double gamma = GammaMax(total_tokens, total_frames);

  std::vector<SweepRow> rows;
  for (double beta : betas) {
    long skipped = 0;
    for (const auto& probs : blank_probs) {
      skipped += static_cast<long>(ClassifyBlankFrames(probs, beta).NumSkipped());
    }
    rows.push_back({beta, static_cast<double>(skipped) / static_cast<double>(total_frames), gamma});
  }
  return rows;
}

void WriteSweepCsv(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << "beta,ratio,gamma_max\n";
  for (const SweepRow& r : rows) {
    os << FormatDouble(r.beta) << ',' << FormatDouble(r.ratio) << ',' << FormatDouble(r.gamma_max)
       << '\n';
  }
}

}  // namespace blankreg
