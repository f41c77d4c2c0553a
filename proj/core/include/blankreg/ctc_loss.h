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

#ifndef BLANKREG_CTC_LOSS_H_
#define BLANKREG_CTC_LOSS_H_

#include "blankreg/lattice.h"
#include "blankreg/matrix.h"
#include "blankreg/topology.h"

namespace blankreg {

struct LossResult {
  // -log p(labels | x), natural log. For Soft the penalties are inside.
  double loss = 0.0;
  // d loss / d logits = softmax - occupancy. Valid when the grid is a
  // log-softmax output.
  Matrix grad_logits;
  // occupancy(t, k): posterior mass on symbol k at frame t.
  Matrix occupancy;
};

// Lattice-based CTC loss for any topology variant. Throws InfeasibleAlignment
// when the lattice is empty.
LossResult CtcLoss(const LabelSequence& labels, const DenseGrid& grid,
                   const TopologyVariant& variant);

// Same as CtcLoss(labels, LogSoftmax(logits), variant).
LossResult CtcLossFromLogits(const LabelSequence& labels, const Matrix& logits,
                             const TopologyVariant& variant);

// Lattice-based loss against a prebuilt training graph, for callers that
// reuse one graph across many grids.
LossResult CtcLossWithGraph(const Fst& training_graph, const DenseGrid& grid, int num_labels,
                            const TopologyVariant& variant);

// Loss from an already intersected lattice (see RescoreLattice). Throws
// InfeasibleAlignment when the lattice is empty.
LossResult CtcLossOnLattice(const Lattice& lat, const DenseGrid& grid, int num_labels,
                            const TopologyVariant& variant);

// Classic alpha recursion over the blank-interleaved 2U+1 state sequence.
// Standard topology only. Throws InfeasibleAlignment if no path exists.
double CtcLossAlpha(const LabelSequence& labels, const DenseGrid& grid);

// Max over (t, k) of |analytic - numeric| / (|numeric| + 1e-8), where
// numeric is the central difference of the loss w.r.t. logits(t, k).
double GradCheck(const LabelSequence& labels, const Matrix& logits,
                 const TopologyVariant& variant, double epsilon = 1e-5);

// Per-frame argmax (lowest column on ties), then CollapseCtc.
LabelSequence GreedyDecode(const DenseGrid& grid);

}  // namespace blankreg

#endif  // BLANKREG_CTC_LOSS_H_
