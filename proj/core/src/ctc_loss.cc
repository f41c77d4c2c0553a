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

#include "blankreg/ctc_loss.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blankreg/errors.h"
#include "blankreg/lattice.h"

namespace blankreg {

LossResult CtcLossWithGraph(const Fst& training_graph, const DenseGrid& grid, int num_labels,
                            const TopologyVariant& variant) {
  return CtcLossOnLattice(IntersectDense(training_graph, grid), grid, num_labels, variant);
}

LossResult CtcLossOnLattice(const Lattice& lat, const DenseGrid& grid, int num_labels,
                            const TopologyVariant& variant) {
  if (lat.Empty()) throw InfeasibleAlignment(grid.num_frames(), num_labels, variant.ToString());

  const Fst& fst = lat.fst;
  std::vector<LogWeight> fwd = ForwardScores(lat, Semiring::kLog);
  std::vector<LogWeight> bwd = BackwardScores(lat, Semiring::kLog);
  const double total = fwd[fst.Final()].value;

  LossResult result;
  result.loss = -total;
  result.occupancy = Matrix(grid.num_frames(), grid.num_columns());
  for (ArcId a = 0; a < fst.NumArcs(); ++a) {
    const int t = lat.frame_of_arc[a];
    if (t == kTerminalFrame) continue;
    const Arc& arc = fst.GetArc(a);
    result.occupancy(t, lat.symbol_of_arc[a]) +=
        std::exp(fwd[arc.src].value + arc.weight.value + bwd[arc.dst].value - total);
  }
  result.grad_logits = Exp(grid.values());
  for (size_t i = 0; i < result.grad_logits.data().size(); ++i) {
    result.grad_logits.data()[i] -= result.occupancy.data()[i];
  }
  return result;
}

LossResult CtcLoss(const LabelSequence& labels, const DenseGrid& grid,
                   const TopologyVariant& variant) {
  Fst graph = BuildTrainingGraph(labels, grid.vocab_size(), variant);
  return CtcLossWithGraph(graph, grid, static_cast<int>(labels.size()), variant);
}

LossResult CtcLossFromLogits(const LabelSequence& labels, const Matrix& logits,
                             const TopologyVariant& variant) {
  return CtcLoss(labels, LogSoftmax(logits), variant);
}

double CtcLossAlpha(const LabelSequence& labels, const DenseGrid& grid) {
  const double kZero = -std::numeric_limits<double>::infinity();
  for (Label y : labels) {
    if (y < 1 || y > grid.vocab_size()) throw InvalidArgument("CtcLossAlpha: label out of range");
  }
  const int num_frames = grid.num_frames();
  const int num_labels = static_cast<int>(labels.size());
  // Blank-interleaved sequence: blank y1 blank y2 ... yU blank.
  const int num_states = 2 * num_labels + 1;
  auto symbol = [&](int s) { return s % 2 == 0 ? kBlank : labels[s / 2]; };

  std::vector<double> alpha(num_states, kZero);
  std::vector<double> next(num_states, kZero);
  alpha[0] = grid(0, kBlank);
  if (num_states > 1) alpha[1] = grid(0, symbol(1));
  for (int t = 1; t < num_frames; ++t) {
    for (int s = 0; s < num_states; ++s) {
      double a = alpha[s];
      if (s >= 1) a = LogAdd(a, alpha[s - 1]);
      if (s >= 2 && symbol(s) != kBlank && symbol(s) != symbol(s - 2)) a = LogAdd(a, alpha[s - 2]);
      next[s] = a == kZero ? kZero : a + grid(t, symbol(s));
    }
    std::swap(alpha, next);
  }
  double total = alpha[num_states - 1];
  if (num_states > 1) total = LogAdd(total, alpha[num_states - 2]);
  if (total == kZero) throw InfeasibleAlignment(num_frames, num_labels, "standard");
  return -total;
}

double GradCheck(const LabelSequence& labels, const Matrix& logits,
                 const TopologyVariant& variant, double epsilon) {
  const Fst graph = BuildTrainingGraph(labels, logits.cols() - 1, variant);
  const int num_labels = static_cast<int>(labels.size());
  auto loss_at = [&](const Matrix& x) {
    return CtcLossWithGraph(graph, LogSoftmax(x), num_labels, variant).loss;
  };
  const LossResult analytic = CtcLossWithGraph(graph, LogSoftmax(logits), num_labels, variant);

  double worst = 0.0;
  Matrix probe = logits;
  for (int t = 0; t < logits.rows(); ++t) {
    for (int k = 0; k < logits.cols(); ++k) {
      const double saved = probe(t, k);
      probe(t, k) = saved + epsilon;
      const double up = loss_at(probe);
      probe(t, k) = saved - epsilon;
      const double down = loss_at(probe);
      probe(t, k) = saved;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double err = std::abs(analytic.grad_logits(t, k) - numeric) / (std::abs(numeric) + 1e-8);
      worst = std::max(worst, err);
    }
  }
  return worst;
}

LabelSequence GreedyDecode(const DenseGrid& grid) {
  std::vector<Label> best(grid.num_frames());
  for (int t = 0; t < grid.num_frames(); ++t) {
    auto row = grid.Row(t);
    best[t] = static_cast<Label>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return CollapseCtc(best);
}

}  // namespace blankreg
