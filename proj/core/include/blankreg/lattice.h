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

#ifndef BLANKREG_LATTICE_H_
#define BLANKREG_LATTICE_H_

#include <cstdint>
#include <vector>

#include "blankreg/fst.h"
#include "blankreg/matrix.h"
#include "blankreg/semiring.h"

namespace blankreg {

// frame_of_arc value for the arc that enters the final state.
inline constexpr int32_t kTerminalFrame = -1;

// Frame-indexed intersection of a graph with a DenseGrid. Every start-final
// path consumes exactly num_frames frame arcs followed by one terminal arc.
// State ids are sorted by frame, so ascending id order is topological.
struct Lattice {
  Fst fst;
  int num_frames = 0;
  // Per arc: frame index in [0, num_frames), or kTerminalFrame.
  std::vector<int32_t> frame_of_arc;
  // Per arc: grid column scored on that arc (-1 on the terminal arc).
  std::vector<int32_t> symbol_of_arc;
  // Per arc: the graph's share of the arc weight (grid score excluded).
  std::vector<LogWeight> graph_weight_of_arc;

  bool Empty() const { return fst.Empty(); }
};

// Intersects `graph` with `grid`. Lattice arc weight is the graph arc weight
// plus grid(t, ilabel); the terminal step after the last frame adds the graph
// weight of the -1 arc. Returns an empty Lattice when no path of exactly
// grid.num_frames() frames exists. Throws InvalidArgument when the graph
// uses input labels outside [-1, V].
Lattice IntersectDense(const Fst& graph, const DenseGrid& grid);

// Recomputes every arc weight as graph weight + grid(t, symbol). The lattice
// structure depends only on the graph and the frame count, so one lattice can
// be reused across grids of the same length. Throws InvalidArgument when the
// frame count or column count does not fit.
void RescoreLattice(Lattice& lat, const DenseGrid& grid);

// Shortest distance from the start state, per state.
std::vector<LogWeight> ForwardScores(const Lattice& lat, Semiring semiring);
// Shortest distance to the final state, per state.
std::vector<LogWeight> BackwardScores(const Lattice& lat, Semiring semiring);

// forward[final]; Zero for an empty lattice.
LogWeight TotalScore(const Lattice& lat, Semiring semiring = Semiring::kLog);

struct BestPath {
  // One symbol per frame.
  std::vector<Label> alignment;
  LogWeight score;
};

// Viterbi path. Among equal-scoring predecessors the lowest arc id wins.
// Throws NoPathError on an empty lattice.
BestPath FindBestPath(const Lattice& lat);

// Posterior probability of traversing each arc, indexed by arc id. Frame arcs
// at any given frame sum to one. Throws NoPathError on an empty lattice.
std::vector<double> ArcPosteriors(const Lattice& lat);

struct LatticePath {
  std::vector<Label> alignment;
  double score = 0.0;
};

// Every start-final path with its score, in depth-first order over ascending
// arc ids. Throws SizeGuardExceeded once more than `max_paths` are found.
std::vector<LatticePath> EnumeratePaths(const Lattice& lat, size_t max_paths = 100000);

}  // namespace blankreg

#endif  // BLANKREG_LATTICE_H_
