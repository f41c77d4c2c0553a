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

#include "blankreg/topology.h"

#include <cmath>
#include <cstdio>

#include "blankreg/errors.h"

namespace blankreg {

TopologyVariant TopologyVariant::Soft(double lambda) {
  TopologyVariant v{Kind::kSoft, lambda, 0};
  v.Validate();
  return v;
}

TopologyVariant TopologyVariant::Hard(int k) {
  TopologyVariant v{Kind::kHard, 0.0, k};
  v.Validate();
  return v;
}

void TopologyVariant::Validate() const {
  switch (kind) {
    case Kind::kStandard:
      return;
    case Kind::kSoft:
      if (!std::isfinite(lambda) || lambda < 0.0) {
        throw InvalidArgument("soft restriction needs a finite lambda >= 0");
      }
      return;
    case Kind::kHard:
      if (k < 1) throw InvalidArgument("hard restriction needs k >= 1");
      return;
  }
  throw InvalidArgument("unknown topology kind");
}

std::string TopologyVariant::ToString() const {
  char buf[64];
  switch (kind) {
    case Kind::kStandard:
      return "standard";
    case Kind::kSoft:
      std::snprintf(buf, sizeof(buf), "soft(%g)", lambda);
      return buf;
    case Kind::kHard:
      return "hard(" + std::to_string(k) + ")";
  }
  return "unknown";
}

namespace {

void CheckVocab(int vocab_size) {
  if (vocab_size < 1) throw InvalidArgument("vocabulary size must be >= 1");
}

}  // namespace

Fst BuildTopology(int vocab_size, const TopologyVariant& variant) {
  CheckVocab(vocab_size);
  variant.Validate();
  const bool hard = variant.kind == TopologyVariant::Kind::kHard;
  // Emission states per symbol: k for Hard, one self-looped state otherwise.
  const int depth = hard ? variant.k : 1;
  const LogWeight loop_weight{variant.kind == TopologyVariant::Kind::kSoft ? -variant.lambda
                                                                           : 0.0};

  Fst fst;
  fst.set_num_input_symbols(vocab_size);
  fst.set_num_output_symbols(vocab_size);
  const StateId blank_state = fst.AddState();
  // emission(k, i): i-th consecutive frame (0-based) spent on symbol k.
  auto emission = [depth](Label k, int i) { return 1 + (k - 1) * depth + i; };
  for (int n = 0; n < vocab_size * depth; ++n) fst.AddState();
  const StateId final_state = fst.AddState();
  fst.SetStart(blank_state);

  fst.AddArc(blank_state, blank_state, kBlank, kEpsilon);
  for (Label k = 1; k <= vocab_size; ++k) fst.AddArc(blank_state, emission(k, 0), k, k);
  fst.AddArc(blank_state, final_state, kFinalLabel, kEpsilon);

  for (Label k = 1; k <= vocab_size; ++k) {
    for (int i = 0; i < depth; ++i) {
      const StateId s = emission(k, i);
      if (!hard) {
        fst.AddArc(s, s, k, kEpsilon, loop_weight);
      } else if (i + 1 < depth) {
        fst.AddArc(s, emission(k, i + 1), k, kEpsilon);
      }
      fst.AddArc(s, blank_state, kBlank, kEpsilon);
      for (Label j = 1; j <= vocab_size; ++j) {
        if (j != k) fst.AddArc(s, emission(j, 0), j, j);
      }
      fst.AddArc(s, final_state, kFinalLabel, kEpsilon);
    }
  }
  fst.SetFinal(final_state);
  return fst;
}

Fst BuildLinearGraph(const LabelSequence& labels, int vocab_size) {
  CheckVocab(vocab_size);
  for (Label y : labels) {
    if (y < 1 || y > vocab_size) {
      throw InvalidArgument("label " + std::to_string(y) + " outside 1.." +
                            std::to_string(vocab_size));
    }
  }
  Fst fst;
  fst.set_num_input_symbols(vocab_size);
  fst.set_num_output_symbols(vocab_size);
  StateId prev = fst.AddState();
  fst.SetStart(prev);
  for (Label y : labels) {
    StateId next = fst.AddState();
    fst.AddArc(prev, next, y, y);
    prev = next;
  }
  StateId final_state = fst.AddState();
  fst.AddArc(prev, final_state, kFinalLabel, kEpsilon);
  fst.SetFinal(final_state);
  return fst;
}

Fst BuildTrainingGraph(const LabelSequence& labels, int vocab_size,
                       const TopologyVariant& variant) {
  return Connect(Compose(BuildTopology(vocab_size, variant), BuildLinearGraph(labels, vocab_size)));
}

int MinAlignmentLength(const LabelSequence& labels) {
  int n = static_cast<int>(labels.size());
  for (size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] == labels[i - 1]) ++n;
  }
  return n;
}

LabelSequence CollapseCtc(const std::vector<Label>& alignment) {
  LabelSequence out;
  Label prev = kBlank;
  for (Label s : alignment) {
    if (s != kBlank && s != prev) out.push_back(s);
    prev = s;
  }
  return out;
}

LabelSequence CollapseTransducer(const std::vector<Label>& alignment) {
  LabelSequence out;
  for (Label s : alignment) {
    if (s != kBlank) out.push_back(s);
  }
  return out;
}

}  // namespace blankreg
