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

#include "blankreg/fst_io.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "blankreg/errors.h"

namespace blankreg {

std::string FormatDouble(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // Shortest rendering with at least 9 significant digits that parses back
  // to the same double.
  char buf[32];
  for (int precision = 9; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void WriteFstText(const Fst& fst, std::ostream& os) {
  if (fst.Empty()) return;
  auto write_state = [&](StateId s) {
    for (ArcId a : fst.OutArcs(s)) {
      const Arc& arc = fst.GetArc(a);
      os << arc.src << ' ' << arc.dst << ' ' << arc.ilabel << ' ' << arc.olabel << ' '
         << FormatDouble(arc.weight.value) << '\n';
    }
  };
  write_state(fst.Start());
  for (StateId s = 0; s < fst.NumStates(); ++s) {
    if (s != fst.Start()) write_state(s);
  }
  os << fst.Final() << '\n';
}

namespace {

double ParseDouble(const std::string& token) {
  if (token == "inf" || token == "Infinity") return std::numeric_limits<double>::infinity();
  if (token == "-inf" || token == "-Infinity") return -std::numeric_limits<double>::infinity();
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + token + "'");
  }
  if (used != token.size()) throw InvalidArgument("not a number: '" + token + "'");
  return v;
}

int ParseInt(const std::string& token) {
  size_t used = 0;
  long v = 0;
  try {
    v = std::stol(token, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not an integer: '" + token + "'");
  }
  if (used != token.size() || v < std::numeric_limits<int>::min() ||
      v > std::numeric_limits<int>::max()) {
    throw InvalidArgument("not an integer: '" + token + "'");
  }
  return static_cast<int>(v);
}

std::vector<std::string> Tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

Fst ReadFstText(std::istream& is) {
  struct Row {
    StateId src, dst;
    Label ilabel, olabel;
    double weight;
  };
  std::vector<Row> rows;
  StateId final_state = kNoState;
  int line_no = 0;
  for (std::string line; std::getline(is, line);) {
    ++line_no;
    auto tok = Tokens(line);
    if (tok.empty()) continue;
    if (final_state != kNoState) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": content after final state");
    }
    if (tok.size() == 1) {
      final_state = ParseInt(tok[0]);
    } else if (tok.size() == 5) {
      rows.push_back(Row{ParseInt(tok[0]), ParseInt(tok[1]), ParseInt(tok[2]), ParseInt(tok[3]),
                         ParseDouble(tok[4])});
    } else {
      throw InvalidArgument("line " + std::to_string(line_no) + ": expected 5 fields or 1");
    }
  }
  if (rows.empty() && final_state == kNoState) return Fst();
  if (final_state == kNoState) throw InvalidArgument("missing final state line");

  StateId max_id = final_state;
  for (const Row& r : rows) {
    if (r.src < 0 || r.dst < 0) throw InvalidArgument("negative state id");
    max_id = std::max({max_id, r.src, r.dst});
  }
  if (final_state < 0) throw InvalidArgument("negative final state id");

  Fst fst;
  for (StateId s = 0; s <= max_id; ++s) fst.AddState();
  for (const Row& r : rows) {
    if (r.src == final_state) throw InvalidArgument("final state has an outgoing arc");
    fst.AddArc(r.src, r.dst, r.ilabel, r.olabel, LogWeight{r.weight});
  }
  fst.SetStart(rows.empty() ? final_state : rows.front().src);
  fst.SetFinal(final_state);
  return fst;
}

void WriteMatrixText(const Matrix& m, std::ostream& os) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (int r = 0; r < m.rows(); ++r) {
    auto row = m.Row(r);
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) os << ' ';
      os << FormatDouble(row[c]);
    }
    os << '\n';
  }
}

Matrix ReadMatrixText(std::istream& is) {
  std::string line;
  std::vector<std::string> header;
  while (header.empty() && std::getline(is, line)) header = Tokens(line);
  if (header.size() != 2) throw InvalidArgument("matrix header must be 'rows cols'");
  int rows = ParseInt(header[0]);
  int cols = ParseInt(header[1]);
  if (rows < 0 || cols < 0) throw InvalidArgument("matrix dimensions must be non-negative");
  std::vector<double> values;
  values.reserve(static_cast<size_t>(rows) * static_cast<size_t>(cols));
  int r = 0;
  while (r < rows && std::getline(is, line)) {
    auto tok = Tokens(line);
    if (tok.empty()) continue;
    if (static_cast<int>(tok.size()) != cols) {
      throw InvalidArgument("matrix row " + std::to_string(r) + " has " +
                            std::to_string(tok.size()) + " values, expected " +
                            std::to_string(cols));
    }
    for (const auto& t : tok) values.push_back(ParseDouble(t));
    ++r;
  }
  if (r != rows) throw InvalidArgument("matrix has fewer rows than its header declares");
  for (; std::getline(is, line);) {
    if (!Tokens(line).empty()) throw InvalidArgument("trailing data after matrix");
  }
  return Matrix(rows, cols, std::move(values));
}

}  // namespace blankreg
