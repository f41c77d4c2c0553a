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

#include "blankreg/toy_train.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include "blankreg/ctc_loss.h"
#include "blankreg/errors.h"
#include "blankreg/fst_io.h"

namespace blankreg {

void CorpusConfig::Validate() const {
  if (vocab_size < 2) throw InvalidArgument("corpus: vocab_size must be >= 2");
  if (feature_dim < vocab_size + 1) throw InvalidArgument("corpus: feature_dim must be >= vocab_size + 1");
  if (mean_stretch < 2) throw InvalidArgument("corpus: mean_stretch must be >= 2");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw InvalidArgument("corpus: noise must be >= 0");
  if (num_utterances < 1) throw InvalidArgument("corpus: need at least one utterance");
  if (min_tokens < 1 || max_tokens < min_tokens) {
    throw InvalidArgument("corpus: need 1 <= min_tokens <= max_tokens");
  }
  if (!std::isfinite(token_scale) || !std::isfinite(onset_scale)) {
    throw InvalidArgument("corpus: feature scales must be finite");
  }
}

long SyntheticCorpus::TotalFrames() const {
  long n = 0;
  for (const auto& u : utterances) n += u.features.rows();
  return n;
}

long SyntheticCorpus::TotalTokens() const {
  long n = 0;
  for (const auto& u : utterances) n += static_cast<long>(u.labels.size());
  return n;
}

int SyntheticCorpus::MaxFrames() const {
  int n = 0;
  for (const auto& u : utterances) n = std::max(n, u.features.rows());
  return n;
}

double SyntheticCorpus::GammaMax() const { return blankreg::GammaMax(TotalTokens(), TotalFrames()); }

SyntheticCorpus GenerateCorpus(const CorpusConfig& config) {
  config.Validate();
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<int> num_tokens(config.min_tokens, config.max_tokens);
  std::uniform_int_distribution<int> token(1, config.vocab_size);
  std::uniform_int_distribution<int> duration(config.mean_stretch - 1, config.mean_stretch + 1);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SyntheticCorpus corpus;
  corpus.config = config;
  corpus.utterances.reserve(config.num_utterances);
  const int onset_dim = config.vocab_size;
  for (int n = 0; n < config.num_utterances; ++n) {
    Utterance utt;
    const int u = num_tokens(rng);
    for (int i = 0; i < u; ++i) {
      Label y = token(rng);
      while (config.distinct_adjacent && !utt.labels.empty() && y == utt.labels.back()) {
        y = token(rng);
      }
      utt.labels.push_back(y);
      utt.durations.push_back(duration(rng));
    }
    int frames = 0;
    for (int d : utt.durations) frames += d;
    utt.features = Matrix(frames, config.feature_dim);
    int t = 0;
    for (int i = 0; i < u; ++i) {
      for (int j = 0; j < utt.durations[i]; ++j, ++t) {
        auto row = utt.features.Row(t);
        row[utt.labels[i] - 1] += config.token_scale;
        const double envelope =
            1.0 - (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(config.mean_stretch);
        row[onset_dim] += config.onset_scale * envelope;
        for (double& x : row) x += config.noise * gauss(rng);
      }
    }
    corpus.utterances.push_back(std::move(utt));
  }
  return corpus;
}

Matrix ToyModel::Logits(const Matrix& features) const {
  const int cols = weights.cols();
  Matrix out(features.rows(), cols);
  for (int t = 0; t < features.rows(); ++t) {
    auto x = features.Row(t);
    auto y = out.Row(t);
    std::copy(bias.begin(), bias.end(), y.begin());
    for (int d = 0; d < features.cols(); ++d) {
      const double xd = x[d];
      auto w = weights.Row(d);
      for (int c = 0; c < cols; ++c) y[c] += xd * w[c];
    }
  }
  return out;
}

std::vector<double> ToyModel::BlankProbs(const Matrix& features) const {
  DenseGrid grid = LogSoftmax(Logits(features));
  std::vector<double> probs(grid.num_frames());
  for (int t = 0; t < grid.num_frames(); ++t) probs[t] = std::exp(grid(t, kBlank));
  return probs;
}

bool ToyModel::AllFinite() const {
  auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(weights.data().begin(), weights.data().end(), finite) &&
         std::all_of(bias.begin(), bias.end(), finite);
}

ToyModel InitModel(int feature_dim, int vocab_size, double scale, uint64_t seed) {
  ToyModel model;
  model.weights = Matrix(feature_dim, vocab_size + 1);
  model.bias.assign(vocab_size + 1, 0.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& w : model.weights.data()) w = scale * gauss(rng);
  return model;
}

int WarmupSteps(const TrainConfig& config) {
  return static_cast<int>(std::ceil(config.warmup_fraction * config.steps));
}

namespace {

Matrix SelectRows(const Matrix& m, const std::vector<size_t>& rows) {
  Matrix out(static_cast<int>(rows.size()), m.cols());
  for (size_t i = 0; i < rows.size(); ++i) {
    auto src = m.Row(static_cast<int>(rows[i]));
    std::copy(src.begin(), src.end(), out.Row(static_cast<int>(i)).begin());
  }
  return out;
}

void ValidateTrainConfig(const TrainConfig& config) {
  config.variant.Validate();
  if (config.steps < 1) throw InvalidArgument("train: steps must be >= 1");
  if (!(config.step_size > 0.0) || !std::isfinite(config.step_size)) {
    throw InvalidArgument("train: step_size must be positive");
  }
  if (!(config.warmup_fraction >= 0.0 && config.warmup_fraction <= 1.0)) {
    throw InvalidArgument("train: warmup_fraction must lie in [0, 1]");
  }
  if (config.skip_beta && !(*config.skip_beta > 0.0 && *config.skip_beta < 1.0)) {
    throw InvalidArgument("train: skip_beta must lie in (0, 1)");
  }
}

}  // namespace

TrainResult Train(const SyntheticCorpus& corpus, const TrainConfig& config) {
  ValidateTrainConfig(config);
  if (corpus.utterances.empty()) throw InvalidArgument("train: empty corpus");
  const int vocab_size = corpus.config.vocab_size;
  const int feature_dim = corpus.config.feature_dim;

  std::vector<Fst> graphs;
  std::vector<Lattice> lattices;
  graphs.reserve(corpus.utterances.size());
  lattices.reserve(corpus.utterances.size());
  for (const Utterance& utt : corpus.utterances) {
    if (utt.features.rows() < MinAlignmentLength(utt.labels)) {
      throw InfeasibleAlignment(utt.features.rows(), static_cast<int>(utt.labels.size()),
                                config.variant.ToString());
    }
    graphs.push_back(BuildTrainingGraph(utt.labels, vocab_size, config.variant));
    // Structure only; weights are filled in per step by RescoreLattice.
    lattices.push_back(IntersectDense(
        graphs.back(), DenseGrid(Matrix(utt.features.rows(), vocab_size + 1))));
    if (lattices.back().Empty()) {
      throw InfeasibleAlignment(utt.features.rows(), static_cast<int>(utt.labels.size()),
                                config.variant.ToString());
    }
  }

  TrainResult result;
  result.model = InitModel(feature_dim, vocab_size, config.init_scale, config.init_seed);
  result.model.step_size = config.step_size;
  ToyModel& model = result.model;
  const int warmup = WarmupSteps(config);
  const double inv_n = 1.0 / static_cast<double>(corpus.utterances.size());

  Matrix grad_w(feature_dim, vocab_size + 1);
  std::vector<double> grad_b(vocab_size + 1);
  for (int step = 0; step < config.steps; ++step) {
    std::fill(grad_w.data().begin(), grad_w.data().end(), 0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);
    double total_loss = 0.0;
    long skipped = 0;
    const bool skipping = config.skip_beta.has_value() && step >= warmup;

    for (size_t n = 0; n < corpus.utterances.size(); ++n) {
      const Utterance& utt = corpus.utterances[n];
      const int num_labels = static_cast<int>(utt.labels.size());
      const Matrix logits = model.Logits(utt.features);

      LossResult loss;
      std::vector<size_t> frames;
      bool reduced = false;
      if (skipping) {
        DenseGrid full = LogSoftmax(logits);
        std::vector<double> blank(full.num_frames());
        for (int t = 0; t < full.num_frames(); ++t) blank[t] = std::exp(full(t, kBlank));
        frames = RetainedIndices(ClassifyBlankFrames(blank, *config.skip_beta));
        // Too few frames left to align the labels: keep the whole utterance.
        if (static_cast<int>(frames.size()) < utt.features.rows() &&
            static_cast<int>(frames.size()) >= std::max(1, MinAlignmentLength(utt.labels))) {
          loss = CtcLossWithGraph(graphs[n], LogSoftmax(SelectRows(logits, frames)), num_labels,
                                  config.variant);
          skipped += utt.features.rows() - static_cast<long>(frames.size());
          reduced = true;
        }
      }
      if (!reduced) {
        DenseGrid grid = LogSoftmax(logits);
        RescoreLattice(lattices[n], grid);
        loss = CtcLossOnLattice(lattices[n], grid, num_labels, config.variant);
        frames.resize(utt.features.rows());
        for (size_t t = 0; t < frames.size(); ++t) frames[t] = t;
      }

      total_loss += loss.loss;
      for (size_t i = 0; i < frames.size(); ++i) {
        auto g = loss.grad_logits.Row(static_cast<int>(i));
        auto x = utt.features.Row(static_cast<int>(frames[i]));
        for (int c = 0; c < static_cast<int>(g.size()); ++c) grad_b[c] += g[c];
        for (int d = 0; d < feature_dim; ++d) {
          auto w = grad_w.Row(d);
          const double xd = x[d];
          for (int c = 0; c < static_cast<int>(g.size()); ++c) w[c] += xd * g[c];
        }
      }
    }

    const double mean_loss = total_loss * inv_n;
    if (!std::isfinite(mean_loss)) throw TrainingDiverged(step);
    result.loss_curve.push_back(mean_loss);
    result.skipped_frames.push_back(skipped);

    const double scale = config.step_size * inv_n;
    for (size_t i = 0; i < grad_w.data().size(); ++i) {
      model.weights.data()[i] -= scale * grad_w.data()[i];
    }
    for (size_t c = 0; c < grad_b.size(); ++c) model.bias[c] -= scale * grad_b[c];
    ++model.step_count;
    if (!model.AllFinite()) throw TrainingDiverged(step);
  }
  return result;
}

int EditDistance(const LabelSequence& ref, const LabelSequence& hyp) {
  std::vector<int> prev(hyp.size() + 1);
  std::vector<int> cur(hyp.size() + 1);
  for (size_t j = 0; j <= hyp.size(); ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= ref.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= hyp.size(); ++j) {
      const int sub = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[hyp.size()];
}

ExperimentReport Evaluate(const ToyModel& model, const SyntheticCorpus& corpus,
                          std::span<const double> betas, double report_beta) {
  std::vector<std::vector<double>> blank_probs;
  std::vector<long> label_counts;
  long errors = 0;
  long ref_tokens = 0;
  for (const Utterance& utt : corpus.utterances) {
    DenseGrid grid = LogSoftmax(model.Logits(utt.features));
    std::vector<double> probs(grid.num_frames());
    for (int t = 0; t < grid.num_frames(); ++t) probs[t] = std::exp(grid(t, kBlank));
    blank_probs.push_back(std::move(probs));
    label_counts.push_back(static_cast<long>(utt.labels.size()));
    errors += EditDistance(utt.labels, GreedyDecode(grid));
    ref_tokens += static_cast<long>(utt.labels.size());
  }

  ExperimentReport report;
  report.curve = SweepThresholds(blank_probs, label_counts, betas);
  const double one_beta[] = {report_beta};
  const SweepRow at_report = SweepThresholds(blank_probs, label_counts, one_beta).front();
  report.reduction_ratio = at_report.ratio;
  report.gamma_max = at_report.gamma_max;
  report.token_error_rate =
      ref_tokens == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(ref_tokens);
  for (const auto& probs : blank_probs) {
    report.retained_frames += static_cast<long>(RetainedIndices(ClassifyBlankFrames(probs, report_beta)).size());
  }
  return report;
}

CorpusConfig EvalCorpusConfig(const ExperimentConfig& config) {
  CorpusConfig eval = config.corpus;
  eval.num_utterances = config.eval_utterances;
  eval.seed = config.eval_seed;
  return eval;
}

std::string ArmLabel(const TopologyVariant& variant, const std::optional<double>& skip_beta) {
  std::string label = variant.ToString();
  if (skip_beta) label += "+skip(" + FormatDouble(*skip_beta) + ")";
  return label;
}

std::vector<ArmResult> CompareVariants(const ExperimentConfig& config,
                                       const std::vector<ExperimentArm>& arms) {
  const SyntheticCorpus train_corpus = GenerateCorpus(config.corpus);
  const SyntheticCorpus eval_corpus = GenerateCorpus(EvalCorpusConfig(config));

  std::vector<ArmResult> results;
  for (const ExperimentArm& arm : arms) {
    TrainConfig tc = config.train;
    tc.variant = arm.variant;
    tc.skip_beta = arm.skip_beta;
    ArmResult r;
    r.training = Train(train_corpus, tc);
    r.report = Evaluate(r.training.model, eval_corpus, config.betas, config.report_beta);
    r.report.name = arm.name.empty() ? ArmLabel(arm.variant, arm.skip_beta) : arm.name;
    r.report.variant = arm.variant;
    r.report.skip_beta = arm.skip_beta;
    r.report.final_loss = r.training.loss_curve.back();
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<ExperimentArm> ReferenceArms() {
  return {
      {"standard", TopologyVariant::Standard(), std::nullopt},
      {"standard+skip", TopologyVariant::Standard(), 0.9},
      {"soft-0.04", TopologyVariant::Soft(0.04), std::nullopt},
      {"soft-5", TopologyVariant::Soft(5.0), std::nullopt},
      {"hard-2", TopologyVariant::Hard(2), std::nullopt},
      {"hard-1", TopologyVariant::Hard(1), std::nullopt},
  };
}

void WriteReportCsv(const std::vector<ExperimentReport>& reports, std::ostream& os) {
  os << "method,variant,skip_beta,final_loss,token_error_rate,reduction_ratio,gamma_max,"
        "retained_frames\n";
  for (const auto& r : reports) {
    os << r.name << ',' << r.variant.ToString() << ','
       << (r.skip_beta ? FormatDouble(*r.skip_beta) : std::string()) << ','
       << FormatDouble(r.final_loss) << ',' << FormatDouble(r.token_error_rate) << ','
       << FormatDouble(r.reduction_ratio) << ',' << FormatDouble(r.gamma_max) << ','
       << r.retained_frames << '\n';
  }
}

void WriteCurvesCsv(const std::vector<ExperimentReport>& reports, std::ostream& os) {
  os << "method,beta,ratio,gamma_max\n";
  for (const auto& r : reports) {
    for (const SweepRow& row : r.curve) {
      os << r.name << ',' << FormatDouble(row.beta) << ',' << FormatDouble(row.ratio) << ','
         << FormatDouble(row.gamma_max) << '\n';
    }
  }
}

void WriteLossCurveCsv(const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& curves, std::ostream& os) {
  os << "step";
  for (const auto& n : names) os << ',' << n;
  os << '\n';
  size_t steps = 0;
  for (const auto& c : curves) steps = std::max(steps, c.size());
  for (size_t s = 0; s < steps; ++s) {
    os << s;
    for (const auto& c : curves) {
      os << ',';
      if (s < c.size()) os << FormatDouble(c[s]);
    }
    os << '\n';
  }
}

}  // namespace blankreg
