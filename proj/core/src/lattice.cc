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

#include "blankreg/lattice.h"

#include <cmath>
#include <string>

#include "blankreg/errors.h"

namespace blankreg {

Lattice IntersectDense(const Fst& graph, const DenseGrid& grid) {
  const int num_frames = grid.num_frames();
  const int num_columns = grid.num_columns();
  for (const Arc& arc : graph.Arcs()) {
    if (arc.ilabel < kFinalLabel || arc.ilabel >= num_columns) {
      throw InvalidArgument("IntersectDense: input label " + std::to_string(arc.ilabel) +
                            " outside [-1, " + std::to_string(num_columns - 1) + "]");
    }
    if ((arc.ilabel == kFinalLabel) != (arc.dst == graph.Final())) {
      throw InvalidArgument("IntersectDense: -1 labels must be exactly the arcs into the final state");
    }
  }

  Lattice raw;
  raw.num_frames = num_frames;
  if (graph.Empty() || graph.Start() == kNoState || graph.Final() == kNoState) return raw;

  Fst& fst = raw.fst;
  // Graph states alive at the current frame, in creation order.
  std::vector<StateId> layer{graph.Start()};
  std::vector<StateId> layer_ids{fst.AddState()};
  fst.SetStart(layer_ids.front());
  std::vector<StateId> next_of(graph.NumStates(), kNoState);

  for (int t = 0; t < num_frames; ++t) {
    std::vector<StateId> next_layer;
    std::vector<StateId> next_ids;
    auto row = grid.Row(t);
    for (size_t i = 0; i < layer.size(); ++i) {
      for (ArcId a : graph.OutArcs(layer[i])) {
        const Arc& arc = graph.GetArc(a);
        if (arc.ilabel == kFinalLabel) continue;
        StateId& dst = next_of[arc.dst];
        if (dst == kNoState) {
          dst = fst.AddState();
          next_layer.push_back(arc.dst);
          next_ids.push_back(dst);
        }
        fst.AddArc(layer_ids[i], dst, arc.ilabel, arc.olabel,
                   Times(arc.weight, LogWeight{row[arc.ilabel]}));
        raw.frame_of_arc.push_back(t);
        raw.symbol_of_arc.push_back(arc.ilabel);
        raw.graph_weight_of_arc.push_back(arc.weight);
      }
    }
    for (StateId g : next_layer) next_of[g] = kNoState;
    layer = std::move(next_layer);
    layer_ids = std::move(next_ids);
  }

  StateId final_state = fst.AddState();
  for (size_t i = 0; i < layer.size(); ++i) {
    for (ArcId a : graph.OutArcs(layer[i])) {
      const Arc& arc = graph.GetArc(a);
      if (arc.ilabel != kFinalLabel) continue;
      fst.AddArc(layer_ids[i], final_state, kFinalLabel, arc.olabel, arc.weight);
      raw.frame_of_arc.push_back(kTerminalFrame);
      raw.symbol_of_arc.push_back(kFinalLabel);
      raw.graph_weight_of_arc.push_back(arc.weight);
    }
  }
  fst.SetFinal(final_state);

  ConnectResult trimmed = ConnectWithArcMap(fst);
  Lattice lat;
  lat.num_frames = num_frames;
  lat.fst = std::move(trimmed.fst);
  lat.frame_of_arc.reserve(trimmed.arc_map.size());
  lat.symbol_of_arc.reserve(trimmed.arc_map.size());
  for (ArcId old : trimmed.arc_map) {
    lat.frame_of_arc.push_back(raw.frame_of_arc[old]);
    lat.symbol_of_arc.push_back(raw.symbol_of_arc[old]);
    lat.graph_weight_of_arc.push_back(raw.graph_weight_of_arc[old]);
  }
  return lat;
}

void RescoreLattice(Lattice& lat, const DenseGrid& grid) {
  if (grid.num_frames() != lat.num_frames) {
    throw InvalidArgument("RescoreLattice: grid has " + std::to_string(grid.num_frames()) +
                          " frames, lattice expects " + std::to_string(lat.num_frames));
  }
  for (ArcId a = 0; a < lat.fst.NumArcs(); ++a) {
    const int t = lat.frame_of_arc[a];
    if (t == kTerminalFrame) {
      lat.fst.SetWeight(a, lat.graph_weight_of_arc[a]);
      continue;
    }
    const int k = lat.symbol_of_arc[a];
    if (k >= grid.num_columns()) throw InvalidArgument("RescoreLattice: symbol outside grid");
    lat.fst.SetWeight(a, Times(lat.graph_weight_of_arc[a], LogWeight{grid(t, k)}));
  }
}

std::vector<LogWeight> ForwardScores(const Lattice& lat, Semiring semiring) {
  const Fst& fst = lat.fst;
  std::vector<LogWeight> score(fst.NumStates(), LogWeight::Zero());
  if (fst.Empty()) return score;
  score[fst.Start()] = LogWeight::One();
  for (StateId s = 0; s < fst.NumStates(); ++s) {
    for (ArcId a : fst.OutArcs(s)) {
      const Arc& arc = fst.GetArc(a);
      score[arc.dst] = Plus(score[arc.dst], Times(score[s], arc.weight), semiring);
    }
  }
  return score;
}

std::vector<LogWeight> BackwardScores(const Lattice& lat, Semiring semiring) {
  const Fst& fst = lat.fst;
  std::vector<LogWeight> score(fst.NumStates(), LogWeight::Zero());
  if (fst.Empty()) return score;
  score[fst.Final()] = LogWeight::One();
  for (StateId s = fst.NumStates() - 1; s >= 0; --s) {
    for (ArcId a : fst.OutArcs(s)) {
      const Arc& arc = fst.GetArc(a);
      score[s] = Plus(score[s], Times(arc.weight, score[arc.dst]), semiring);
    }
  }
  return score;
}

LogWeight TotalScore(const Lattice& lat, Semiring semiring) {
  if (lat.Empty()) return LogWeight::Zero();
  return ForwardScores(lat, semiring)[lat.fst.Final()];
}

BestPath FindBestPath(const Lattice& lat) {
  if (lat.Empty()) throw NoPathError("FindBestPath: empty lattice");
  const Fst& fst = lat.fst;
  std::vector<LogWeight> fwd = ForwardScores(lat, Semiring::kTropical);

  // Incoming arcs per state, ascending arc id.
  std::vector<std::vector<ArcId>> incoming(fst.NumStates());
  for (ArcId a = 0; a < fst.NumArcs(); ++a) incoming[fst.GetArc(a).dst].push_back(a);

  BestPath best;
  best.score = fwd[fst.Final()];
  std::vector<Label> reversed;
  for (StateId s = fst.Final(); s != fst.Start();) {
    ArcId chosen = -1;
    for (ArcId a : incoming[s]) {
      const Arc& arc = fst.GetArc(a);
      if (Times(fwd[arc.src], arc.weight).value == fwd[s].value) {
        chosen = a;
        break;
      }
    }
    if (chosen < 0) throw NoPathError("FindBestPath: broken traceback");
    if (lat.frame_of_arc[chosen] != kTerminalFrame) reversed.push_back(lat.symbol_of_arc[chosen]);
    s = fst.GetArc(chosen).src;
  }
  best.alignment.assign(reversed.rbegin(), reversed.rend());
  return best;
}

std::vector<double> ArcPosteriors(const Lattice& lat) {
  if (lat.Empty()) throw NoPathError("ArcPosteriors: empty lattice");
  const Fst& fst = lat.fst;
  std::vector<LogWeight> fwd = ForwardScores(lat, Semiring::kLog);
  std::vector<LogWeight> bwd = BackwardScores(lat, Semiring::kLog);
  const double total = fwd[fst.Final()].value;
  std::vector<double> post(fst.NumArcs());
  for (ArcId a = 0; a < fst.NumArcs(); ++a) {
    const Arc& arc = fst.GetArc(a);
    post[a] = std::exp(fwd[arc.src].value + arc.weight.value + bwd[arc.dst].value - total);
  }
  return post;
}

namespace {

void ExtendPaths(const Lattice& lat, StateId s, std::vector<Label>& symbols, double score,
                 size_t max_paths, std::vector<LatticePath>& paths) {
  const Fst& fst = lat.fst;
  if (s == fst.Final()) {
    if (paths.size() >= max_paths) throw SizeGuardExceeded("EnumeratePaths: too many paths");
    paths.push_back({symbols, score});
    return;
  }
  for (ArcId a : fst.OutArcs(s)) {
    const Arc& arc = fst.GetArc(a);
    bool frame_arc = lat.frame_of_arc[a] != kTerminalFrame;
    if (frame_arc) symbols.push_back(lat.symbol_of_arc[a]);
    ExtendPaths(lat, arc.dst, symbols, score + arc.weight.value, max_paths, paths);
    if (frame_arc) symbols.pop_back();
  }
}

}  // namespace

std::vector<LatticePath> EnumeratePaths(const Lattice& lat, size_t max_paths) {
  std::vector<LatticePath> paths;
  if (lat.Empty()) return paths;
  std::vector<Label> symbols;
  ExtendPaths(lat, lat.fst.Start(), symbols, 0.0, max_paths, paths);
  return paths;
}

}  // namespace blankreg
