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

#include "blankreg/semiring.h"

#include <algorithm>
#include <cmath>

namespace blankreg {

double LogAdd(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

LogWeight Plus(LogWeight a, LogWeight b) { return LogWeight{LogAdd(a.value, b.value)}; }

LogWeight TropicalPlus(LogWeight a, LogWeight b) {
  return LogWeight{std::max(a.value, b.value)};
}

LogWeight Times(LogWeight a, LogWeight b) {
  if (a.IsZero() || b.IsZero()) return LogWeight::Zero();
  return LogWeight{a.value + b.value};
}

}  // namespace blankreg
