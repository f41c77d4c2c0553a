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

#ifndef BLANKREG_SEMIRING_H_
#define BLANKREG_SEMIRING_H_

#include <limits>

namespace blankreg {

// Which semiring "plus" a shortest-distance pass uses. Both share real
// addition as "times".
enum class Semiring { kLog, kTropical };

// A natural-log-scale score. Plus is log-sum-exp, Times is real addition,
// Zero is -inf and One is 0.
struct LogWeight {
  double value = 0.0;

  static constexpr LogWeight Zero() {
    return LogWeight{-std::numeric_limits<double>::infinity()};
  }
  static constexpr LogWeight One() { return LogWeight{0.0}; }

  bool IsZero() const { return value == -std::numeric_limits<double>::infinity(); }

  friend bool operator==(LogWeight a, LogWeight b) = default;
};

// log(exp(a) + exp(b)) computed around the larger operand.
double LogAdd(double a, double b);

LogWeight Plus(LogWeight a, LogWeight b);
LogWeight TropicalPlus(LogWeight a, LogWeight b);
LogWeight Times(LogWeight a, LogWeight b);

inline LogWeight Plus(LogWeight a, LogWeight b, Semiring semiring) {
  return semiring == Semiring::kLog ? Plus(a, b) : TropicalPlus(a, b);
}

}  // namespace blankreg

#endif  // BLANKREG_SEMIRING_H_
