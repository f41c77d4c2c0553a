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

#ifndef BLANKREG_FST_IO_H_
#define BLANKREG_FST_IO_H_

#include <iosfwd>
#include <string>

#include "blankreg/fst.h"
#include "blankreg/matrix.h"

namespace blankreg {

// Text FST format: one arc per line as "src dst ilabel olabel weight", then a
// line holding the final state id. Arcs of the start state are written first;
// a reader takes the source of the first arc as the start state. An empty Fst
// writes nothing. Weights are written with FormatDouble().
void WriteFstText(const Fst& fst, std::ostream& os);
// Throws InvalidArgument on malformed text.
Fst ReadFstText(std::istream& is);

// Matrix text format: "rows cols" on the first line, then one line of
// space-separated values per row.
void WriteMatrixText(const Matrix& m, std::ostream& os);
Matrix ReadMatrixText(std::istream& is);

// Decimal rendering used by all text outputs: at least 9 significant digits,
// and enough to parse back to the identical double.
std::string FormatDouble(double v);

}  // namespace blankreg

#endif  // BLANKREG_FST_IO_H_
