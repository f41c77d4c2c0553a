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

#ifndef BLANKREG_ERRORS_H_
#define BLANKREG_ERRORS_H_

#include <stdexcept>
#include <string>

namespace blankreg {

// Bad parameters, malformed input, or mismatched alphabets.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A lattice or graph has no start-to-final path where one is required.
class NoPathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The label sequence cannot be aligned to the given number of frames under
// the requested topology.
class InfeasibleAlignment : public std::runtime_error {
 public:
  InfeasibleAlignment(int num_frames, int num_labels, const std::string& variant)
      : std::runtime_error("infeasible alignment: T=" + std::to_string(num_frames) +
                           " U=" + std::to_string(num_labels) + " variant=" + variant),
        num_frames_(num_frames),
        num_labels_(num_labels),
        variant_(variant) {}

  int num_frames() const { return num_frames_; }
  int num_labels() const { return num_labels_; }
  const std::string& variant() const { return variant_; }

 private:
  int num_frames_;
  int num_labels_;
  std::string variant_;
};

// Exhaustive enumeration refused because the instance exceeds its guard.
class SizeGuardExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Training produced a non-finite loss.
class TrainingDiverged : public std::runtime_error {
 public:
  explicit TrainingDiverged(int step)
      : std::runtime_error("training diverged at step " + std::to_string(step)),
        step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace blankreg

#endif  // BLANKREG_ERRORS_H_
