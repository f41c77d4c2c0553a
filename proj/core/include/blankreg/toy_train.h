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

#ifndef BLANKREG_TOY_TRAIN_H_
#define BLANKREG_TOY_TRAIN_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "blankreg/blank_skip.h"
#include "blankreg/matrix.h"
#include "blankreg/topology.h"

namespace blankreg {

// Synthetic frame-labelled data. Token k owns direction e_{k-1} in feature
// space; dimension V carries a linear ramp over each token segment,
// onset_scale * (1 - (2j + 1) / mean_stretch) at position j, so the ramp is
// positive in the first half of a mean-length segment and negative after.
// Every dimension gets N(0, noise^2) added.
struct CorpusConfig {
  int vocab_size = 5;
  int feature_dim = 16;
  int mean_stretch = 4;
  double noise = 0.2;
  int num_utterances = 200;
  int min_tokens = 3;
  int max_tokens = 8;
  bool distinct_adjacent = true;
  double token_scale = 1.0;
  double onset_scale = 2.0;
  uint64_t seed = 1;

  // Throws InvalidArgument on any violated precondition.
  void Validate() const;
};

struct Utterance {
  Matrix features;  // T x D
  LabelSequence labels;
  std::vector<int> durations;  // frames per token, sums to T
};

struct SyntheticCorpus {
  CorpusConfig config;
  std::vector<Utterance> utterances;

  long TotalFrames() const;
  long TotalTokens() const;
  int MaxFrames() const;
  // 1 - sum(U) / sum(T).
  double GammaMax() const;
};

// Deterministic for a given config (including seed).
SyntheticCorpus GenerateCorpus(const CorpusConfig& config);

// Per-frame linear classifier: logits = features * weights + bias.
struct ToyModel {
  Matrix weights;            // D x (V+1)
  std::vector<double> bias;  // V+1
  double step_size = 0.0;
  int step_count = 0;

  Matrix Logits(const Matrix& features) const;
  // softmax(logits)(t, 0) per frame.
  std::vector<double> BlankProbs(const Matrix& features) const;
  bool AllFinite() const;
};

ToyModel InitModel(int feature_dim, int vocab_size, double scale, uint64_t seed);

struct TrainConfig {
  TopologyVariant variant;
  int steps = 2000;
  double step_size = 0.5;
  // When set, frames whose blank probability exceeds it are dropped from the
  // loss once warmup is over.
  std::optional<double> skip_beta;
  double warmup_fraction = 0.1;
  double init_scale = 0.01;
  uint64_t init_seed = 7;
};

struct TrainResult {
  ToyModel model;
  // Mean loss before each update, one entry per step.
  std::vector<double> loss_curve;
  // Per step: frames removed by skipping (0 during warmup).
  std::vector<long> skipped_frames;
};

// First step index at which frame skipping may be applied.
int WarmupSteps(const TrainConfig& config);

// Full-batch gradient descent on the mean CTC loss. Throws InfeasibleAlignment
// up front if an utterance cannot be aligned under the variant, and
// TrainingDiverged on a non-finite loss.
TrainResult Train(const SyntheticCorpus& corpus, const TrainConfig& config);

// Levenshtein distance between token sequences.
int EditDistance(const LabelSequence& ref, const LabelSequence& hyp);

struct ExperimentReport {
  std::string name;
  TopologyVariant variant;
  std::optional<double> skip_beta;
  double final_loss = 0.0;
  // Corpus reduction ratio per decoding beta.
  std::vector<SweepRow> curve;
  // Ratio at the report beta.
  double reduction_ratio = 0.0;
  // Sum of edit distances / sum of reference lengths, greedy decoding.
  double token_error_rate = 0.0;
  double gamma_max = 0.0;
  // Frames kept at the report beta; stands in for decoding cost.
  long retained_frames = 0;
};

ExperimentReport Evaluate(const ToyModel& model, const SyntheticCorpus& corpus,
                          std::span<const double> betas, double report_beta = 0.9);

// One row of a comparison.
struct ExperimentArm {
  std::string name;
  TopologyVariant variant;
  std::optional<double> skip_beta;
};

struct ExperimentConfig {
  CorpusConfig corpus;
  int eval_utterances = 50;
  uint64_t eval_seed = 2;
  TrainConfig train;  // variant and skip_beta are taken from each arm
  std::vector<double> betas{std::begin(kDefaultSweepBetas), std::end(kDefaultSweepBetas)};
  double report_beta = 0.9;
};

struct ArmResult {
  ExperimentReport report;
  TrainResult training;
};

// Trains and evaluates every arm on the same data and initialisation.
std::vector<ArmResult> CompareVariants(const ExperimentConfig& config,
                                       const std::vector<ExperimentArm>& arms);

// Corpus config for the held-out evaluation set of an experiment.
CorpusConfig EvalCorpusConfig(const ExperimentConfig& config);

// Plain Standard plus the five arms of the reduction-ratio ordering.
std::vector<ExperimentArm> ReferenceArms();

// CSV writers; every file starts with a header row.
void WriteReportCsv(const std::vector<ExperimentReport>& reports, std::ostream& os);
void WriteCurvesCsv(const std::vector<ExperimentReport>& reports, std::ostream& os);
void WriteLossCurveCsv(const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& curves, std::ostream& os);

// Arm label such as "standard+skip(0.9)".
std::string ArmLabel(const TopologyVariant& variant, const std::optional<double>& skip_beta);

}  // namespace blankreg

#endif  // BLANKREG_TOY_TRAIN_H_
