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

#ifndef BLANKREG_TOPOLOGY_H_
#define BLANKREG_TOPOLOGY_H_

#include <string>
#include <vector>

#include "blankreg/fst.h"

namespace blankreg {

using LabelSequence = std::vector<Label>;

// CTC topology flavours. Soft adds a fixed penalty to every non-blank
// self-loop; Hard caps runs of identical non-blank inputs at k frames
// (counting the first one).
struct TopologyVariant {
  enum class Kind { kStandard, kSoft, kHard };

  Kind kind = Kind::kStandard;
  double lambda = 0.0;
  int k = 0;

  static TopologyVariant Standard() { return {}; }
  // Throws InvalidArgument unless lambda is finite and >= 0.
  static TopologyVariant Soft(double lambda);
  // Throws InvalidArgument unless k >= 1.
  static TopologyVariant Hard(int k);

  // Re-checks the invariants above.
  void Validate() const;
  // "standard", "soft(0.05)", "hard(2)".
  std::string ToString() const;

  friend bool operator==(const TopologyVariant&, const TopologyVariant&) = default;
};

// H: input alphabet {blank, 1..V}, output {eps, 1..V}. State 0 is the blank
// state; each symbol owns one emission state (Standard, Soft) or a chain of k
// of them (Hard). Every non-final state has a -1:0 arc into the final state.
Fst BuildTopology(int vocab_size, const TopologyVariant& variant);

// L at token level: a chain of U+1 states accepting exactly `labels`, with a
// terminal arc into the final state. Throws InvalidArgument for tokens
// outside 1..vocab_size.
Fst BuildLinearGraph(const LabelSequence& labels, int vocab_size);

// Connect(Compose(H, L)). Empty when no alignment exists at any length.
Fst BuildTrainingGraph(const LabelSequence& labels, int vocab_size,
                       const TopologyVariant& variant);

// Smallest number of frames any alignment of `labels` needs: one frame per
// token plus one blank between each pair of identical neighbours.
int MinAlignmentLength(const LabelSequence& labels);

// B: merge adjacent duplicates, then drop blanks.
LabelSequence CollapseCtc(const std::vector<Label>& alignment);
// A: drop blanks only.
LabelSequence CollapseTransducer(const std::vector<Label>& alignment);

}  // namespace blankreg

#endif  // BLANKREG_TOPOLOGY_H_
