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

#ifndef BLANKREG_ORACLE_H_
#define BLANKREG_ORACLE_H_

// Brute-force references that work straight from the definition of the
// collapse map. They share no code with the graph construction and are
// meant for cross-checking it on small instances.

#include <vector>

#include "blankreg/matrix.h"
#include "blankreg/topology.h"

namespace blankreg {

inline constexpr int kMaxOracleFrames = 12;
inline constexpr int kMaxOracleVocab = 4;

// Every pi in {0..V}^T with CollapseCtc(pi) == labels, and for Hard(k) no run
// of one non-blank symbol longer than k. Lexicographic order. Throws
// SizeGuardExceeded when T > 12 or V > 4.
std::vector<std::vector<Label>> EnumerateAlignments(const LabelSequence& labels,
                                                    int num_frames, int vocab_size,
                                                    const TopologyVariant& variant);

// Number of non-blank self-loop steps: sum over runs of (run length - 1).
int CountNonBlankRepeats(const std::vector<Label>& alignment);

// Extra score a variant's graph puts on an alignment (-lambda per repeat step
// for Soft, zero otherwise).
double AlignmentPenalty(const std::vector<Label>& alignment, const TopologyVariant& variant);

// -log sum over EnumerateAlignments of exp(sum_t grid(t, pi_t) + penalty).
// +inf when the alignment set is empty.
double BruteForceLoss(const LabelSequence& labels, const DenseGrid& grid,
                      const TopologyVariant& variant);

}  // namespace blankreg

#endif  // BLANKREG_ORACLE_H_
