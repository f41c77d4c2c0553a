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

#include "blankreg/fst.h"

#include <deque>
#include <map>
#include <string>
#include <utility>

#include "blankreg/errors.h"

namespace blankreg {

StateId Fst::AddState() {
  out_arcs_.emplace_back();
  return num_states_++;
}

ArcId Fst::AddArc(StateId src, StateId dst, Label ilabel, Label olabel, LogWeight weight) {
  if (src < 0 || src >= num_states_ || dst < 0 || dst >= num_states_) {
    throw InvalidArgument("AddArc: state id out of range");
  }
  if (src == final_) throw InvalidArgument("AddArc: the final state has no outgoing arcs");
  auto id = static_cast<ArcId>(arcs_.size());
  arcs_.push_back(Arc{src, dst, ilabel, olabel, weight});
  out_arcs_[src].push_back(id);
  return id;
}

void Fst::SetStart(StateId s) {
  if (s < 0 || s >= num_states_) throw InvalidArgument("SetStart: state id out of range");
  start_ = s;
}

void Fst::SetFinal(StateId s) {
  if (s < 0 || s >= num_states_) throw InvalidArgument("SetFinal: state id out of range");
  if (!out_arcs_[s].empty()) throw InvalidArgument("SetFinal: final state has outgoing arcs");
  final_ = s;
}

namespace {

std::vector<bool> Accessible(const Fst& fst) {
  std::vector<bool> seen(fst.NumStates(), false);
  std::vector<StateId> stack{fst.Start()};
  seen[fst.Start()] = true;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (ArcId a : fst.OutArcs(s)) {
      StateId d = fst.GetArc(a).dst;
      if (!seen[d]) {
        seen[d] = true;
        stack.push_back(d);
      }
    }
  }
  return seen;
}

std::vector<bool> Coaccessible(const Fst& fst) {
  std::vector<std::vector<StateId>> preds(fst.NumStates());
  for (const Arc& arc : fst.Arcs()) preds[arc.dst].push_back(arc.src);
  std::vector<bool> seen(fst.NumStates(), false);
  std::vector<StateId> stack{fst.Final()};
  seen[fst.Final()] = true;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId p : preds[s]) {
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  return seen;
}

}  // namespace

ConnectResult ConnectWithArcMap(const Fst& fst) {
  ConnectResult result;
  if (fst.Empty() || fst.Start() == kNoState || fst.Final() == kNoState) return result;

  std::vector<bool> acc = Accessible(fst);
  if (!acc[fst.Final()]) return result;
  std::vector<bool> coacc = Coaccessible(fst);

  std::vector<StateId> remap(fst.NumStates(), kNoState);
  Fst& out = result.fst;
  for (StateId s = 0; s < fst.NumStates(); ++s) {
    if (acc[s] && coacc[s]) remap[s] = out.AddState();
  }
  out.SetStart(remap[fst.Start()]);
  for (ArcId a = 0; a < fst.NumArcs(); ++a) {
    const Arc& arc = fst.GetArc(a);
    if (remap[arc.src] == kNoState || remap[arc.dst] == kNoState) continue;
    out.AddArc(remap[arc.src], remap[arc.dst], arc.ilabel, arc.olabel, arc.weight);
    result.arc_map.push_back(a);
  }
  out.SetFinal(remap[fst.Final()]);
  out.set_num_input_symbols(fst.num_input_symbols());
  out.set_num_output_symbols(fst.num_output_symbols());
  return result;
}

Fst Connect(const Fst& fst) { return ConnectWithArcMap(fst).fst; }

Fst Compose(const Fst& a, const Fst& b) {
  if (a.num_output_symbols() != 0 && b.num_input_symbols() != 0 &&
      a.num_output_symbols() != b.num_input_symbols()) {
    throw InvalidArgument("Compose: output alphabet of size " +
                          std::to_string(a.num_output_symbols()) +
                          " does not match input alphabet of size " +
                          std::to_string(b.num_input_symbols()));
  }
  for (const Arc& arc : b.Arcs()) {
    if (arc.ilabel == kEpsilon) {
      throw InvalidArgument("Compose: right operand has an input-epsilon arc");
    }
  }
  if (a.Empty() || b.Empty() || a.Start() == kNoState || b.Start() == kNoState) return Fst();

  Fst out;
  out.set_num_input_symbols(a.num_input_symbols());
  out.set_num_output_symbols(b.num_output_symbols());

  std::map<std::pair<StateId, StateId>, StateId> ids;
  std::deque<std::pair<StateId, StateId>> queue;
  auto state_of = [&](StateId sa, StateId sb) {
    auto [it, inserted] = ids.try_emplace({sa, sb}, kNoState);
    if (inserted) {
      it->second = out.AddState();
      queue.emplace_back(sa, sb);
    }
    return it->second;
  };

  // The final pair is created lazily, and must stay arc-free.
  const std::pair<StateId, StateId> final_pair{a.Final(), b.Final()};
  out.SetStart(state_of(a.Start(), b.Start()));
  while (!queue.empty()) {
    auto [sa, sb] = queue.front();
    queue.pop_front();
    if (std::pair{sa, sb} == final_pair) continue;
    StateId src = ids.at({sa, sb});
    for (ArcId ia : a.OutArcs(sa)) {
      const Arc& ea = a.GetArc(ia);
      if (ea.ilabel == kFinalLabel) {
        for (ArcId ib : b.OutArcs(sb)) {
          const Arc& eb = b.GetArc(ib);
          if (eb.ilabel != kFinalLabel) continue;
          StateId dst = state_of(ea.dst, eb.dst);
          out.AddArc(src, dst, kFinalLabel, kEpsilon, Times(ea.weight, eb.weight));
        }
      } else if (ea.olabel == kEpsilon) {
        StateId dst = state_of(ea.dst, sb);
        out.AddArc(src, dst, ea.ilabel, kEpsilon, ea.weight);
      } else {
        for (ArcId ib : b.OutArcs(sb)) {
          const Arc& eb = b.GetArc(ib);
          if (eb.ilabel != ea.olabel) continue;
          StateId dst = state_of(ea.dst, eb.dst);
          out.AddArc(src, dst, ea.ilabel, eb.olabel, Times(ea.weight, eb.weight));
        }
      }
    }
  }

  auto it = ids.find(final_pair);
  if (it == ids.end()) return Fst();
  out.SetFinal(it->second);
  return out;
}

}  // namespace blankreg
