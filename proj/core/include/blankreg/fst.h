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

#ifndef BLANKREG_FST_H_
#define BLANKREG_FST_H_

#include <cstdint>
#include <span>
#include <vector>

#include "blankreg/semiring.h"

namespace blankreg {

using StateId = int32_t;
using ArcId = int32_t;
using Label = int32_t;

inline constexpr StateId kNoState = -1;

// Input label 0 is blank; output label 0 is epsilon.
inline constexpr Label kBlank = 0;
inline constexpr Label kEpsilon = 0;
// Input label carried by arcs that enter the super-final state.
inline constexpr Label kFinalLabel = -1;

struct Arc {
  StateId src = kNoState;
  StateId dst = kNoState;
  Label ilabel = kBlank;
  Label olabel = kEpsilon;
  LogWeight weight = LogWeight::One();

  friend bool operator==(const Arc&, const Arc&) = default;
};

// Weighted transducer with one start state and one super-final state. The
// final state has no outgoing arcs; arcs entering it carry the -1:0 sentinel.
//
// Arc ids are insertion order and are stable for the life of the object.
// An Fst with zero states is "empty" and accepts nothing.
class Fst {
 public:
  Fst() = default;

  StateId AddState();
  // Returns the id of the new arc. Throws InvalidArgument on bad state ids
  // or when adding an outgoing arc to the final state.
  ArcId AddArc(StateId src, StateId dst, Label ilabel, Label olabel,
               LogWeight weight = LogWeight::One());

  void SetWeight(ArcId a, LogWeight w) { arcs_[a].weight = w; }

  void SetStart(StateId s);
  void SetFinal(StateId s);

  StateId Start() const { return start_; }
  StateId Final() const { return final_; }
  int32_t NumStates() const { return num_states_; }
  int32_t NumArcs() const { return static_cast<int32_t>(arcs_.size()); }
  bool Empty() const { return num_states_ == 0; }

  const Arc& GetArc(ArcId a) const { return arcs_[a]; }
  std::span<const Arc> Arcs() const { return arcs_; }
  // Ids of the arcs leaving `s`, ascending.
  std::span<const ArcId> OutArcs(StateId s) const { return out_arcs_[s]; }

  // Declared alphabet sizes (symbols 1..n, excluding blank/epsilon). Zero
  // means undeclared; Compose() only checks declared sizes.
  int32_t num_input_symbols() const { return num_input_symbols_; }
  int32_t num_output_symbols() const { return num_output_symbols_; }
  void set_num_input_symbols(int32_t n) { num_input_symbols_ = n; }
  void set_num_output_symbols(int32_t n) { num_output_symbols_ = n; }

 private:
  int32_t num_states_ = 0;
  StateId start_ = kNoState;
  StateId final_ = kNoState;
  std::vector<Arc> arcs_;
  std::vector<std::vector<ArcId>> out_arcs_;
  int32_t num_input_symbols_ = 0;
  int32_t num_output_symbols_ = 0;
};

// Result of Connect() with bookkeeping for callers that attach per-arc data.
struct ConnectResult {
  Fst fst;
  // arc_map[new_arc] = arc id in the input.
  std::vector<ArcId> arc_map;
};

// Removes states that are not both accessible from the start and
// co-accessible to the final state. Surviving states keep their relative
// order and are renumbered densely. Returns an empty Fst if the final state
// is unreachable.
Fst Connect(const Fst& fst);
ConnectResult ConnectWithArcMap(const Fst& fst);

// Composition of a transducer `a` with an input-epsilon-free `b` (a label
// chain in practice). Output-epsilon arcs of `a` advance `a` alone; the
// terminal sentinel arcs of both operands are matched with each other.
// Throws InvalidArgument if declared alphabets disagree. Returns an empty Fst
// when the composed language is empty; the result is not trimmed otherwise.
Fst Compose(const Fst& a, const Fst& b);

}  // namespace blankreg

#endif  // BLANKREG_FST_H_
