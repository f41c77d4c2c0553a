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

#include "cli.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blankreg/blank_skip.h"
#include "blankreg/ctc_loss.h"
#include "blankreg/errors.h"
#include "blankreg/fst_io.h"
#include "blankreg/matrix.h"
#include "blankreg/oracle.h"
#include "blankreg/topology.h"
#include "blankreg/toy_train.h"
#include "json.hpp"

namespace blankreg::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Bad flag values or config contents; maps to kExitUsageError.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VariantFlags {
  std::string name = "standard";
  std::optional<double> lambda;
  std::optional<int> k;
};

void AddVariantFlags(CLI::App* app, VariantFlags* flags) {
  app->add_option("--variant", flags->name, "Topology: standard, soft or hard")
      ->check(CLI::IsMember({"standard", "soft", "hard"}));
  app->add_option("--lambda", flags->lambda, "Self-loop penalty for soft");
  app->add_option("--k", flags->k, "Maximum run length for hard");
}

TopologyVariant ToVariant(const VariantFlags& flags) {
  if (flags.name != "soft" && flags.lambda) {
    throw UsageError("--lambda only applies to --variant soft");
  }
  if (flags.name != "hard" && flags.k) throw UsageError("--k only applies to --variant hard");
  TopologyVariant variant;
  if (flags.name == "soft") {
    if (!flags.lambda) throw UsageError("--variant soft needs --lambda");
    variant = TopologyVariant::Soft(*flags.lambda);
  } else if (flags.name == "hard") {
    if (!flags.k) throw UsageError("--variant hard needs --k");
    variant = TopologyVariant::Hard(*flags.k);
  } else if (flags.name != "standard") {
    throw UsageError("unknown variant '" + flags.name + "'");
  }
  try {
    variant.Validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return variant;
}

std::vector<std::string> SplitCsv(const std::string& text) {
  std::vector<std::string> fields;
  if (text.empty()) return fields;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto first = field.find_first_not_of(" \t");
    const auto last = field.find_last_not_of(" \t");
    fields.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
  }
  if (text.back() == ',') fields.push_back("");
  return fields;
}

// Tokens are either letters (A=1, B=2, ...) or positive integers.
LabelSequence ParseLabels(const std::string& text) {
  LabelSequence labels;
  for (const std::string& field : SplitCsv(text)) {
    if (field.size() == 1 && field[0] >= 'A' && field[0] <= 'Z') {
      labels.push_back(field[0] - 'A' + 1);
      continue;
    }
    Label value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || value < 1) {
      throw UsageError("bad label '" + field + "' in --labels");
    }
    labels.push_back(value);
  }
  return labels;
}

std::vector<double> ParseDoubles(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  for (const std::string& field : SplitCsv(text)) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || *end != '\0' || !std::isfinite(v)) {
      throw UsageError("bad number '" + field + "' in " + flag);
    }
    values.push_back(v);
  }
  if (values.empty()) throw UsageError(flag + " is empty");
  return values;
}

Matrix ReadMatrixFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return ReadMatrixText(in);
}

// Writes through a temporary sibling and renames on success, so a failed
// command leaves no partial file behind.
void WriteAtomically(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  fs::path tmp = path;
  tmp += ".tmp";
  try {
    {
      std::ofstream os(tmp, std::ios::trunc);
      if (!os) throw std::runtime_error("cannot write '" + tmp.string() + "'");
      body(os);
      os.flush();
      if (!os) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw;
  }
}

void Emit(const std::string& out_path, std::ostream& out,
          const std::function<void(std::ostream&)>& body) {
  if (out_path.empty()) {
    body(out);
  } else {
    WriteAtomically(out_path, body);
  }
}

void WriteModel(const ToyModel& model, std::ostream& os) {
  // Weights rows followed by the bias as the last row.
  Matrix m(model.weights.rows() + 1, model.weights.cols());
  for (int r = 0; r < model.weights.rows(); ++r) {
    for (int c = 0; c < model.weights.cols(); ++c) m(r, c) = model.weights(r, c);
  }
  for (int c = 0; c < model.weights.cols(); ++c) m(model.weights.rows(), c) = model.bias[c];
  WriteMatrixText(m, os);
}

template <typename T>
void Take(const json& obj, const char* key, T* dst) {
  if (obj.contains(key)) *dst = obj.at(key).get<T>();
}

void CheckKeys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw UsageError(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* k) { return item.key() == k; })) {
      throw UsageError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

// Values from the file override the corresponding flags.
void ApplyConfigFile(const std::string& path, ExperimentConfig* config, VariantFlags* variant,
                     std::optional<double>* skip_beta) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path + "'");
  try {
    const json root = json::parse(in);
    CheckKeys(root,
              {"corpus", "train", "eval_utterances", "eval_seed", "betas", "report_beta",
               "variant", "lambda", "k", "skip_beta"},
              "config");
    if (root.contains("corpus")) {
      const json& c = root.at("corpus");
      CheckKeys(c,
                {"vocab_size", "feature_dim", "mean_stretch", "noise", "num_utterances",
                 "min_tokens", "max_tokens", "distinct_adjacent", "token_scale", "onset_scale",
                 "seed"},
                "corpus");
      CorpusConfig& cc = config->corpus;
      Take(c, "vocab_size", &cc.vocab_size);
      Take(c, "feature_dim", &cc.feature_dim);
      Take(c, "mean_stretch", &cc.mean_stretch);
      Take(c, "noise", &cc.noise);
      Take(c, "num_utterances", &cc.num_utterances);
      Take(c, "min_tokens", &cc.min_tokens);
      Take(c, "max_tokens", &cc.max_tokens);
      Take(c, "distinct_adjacent", &cc.distinct_adjacent);
      Take(c, "token_scale", &cc.token_scale);
      Take(c, "onset_scale", &cc.onset_scale);
      Take(c, "seed", &cc.seed);
    }
    if (root.contains("train")) {
      const json& t = root.at("train");
      CheckKeys(t, {"steps", "step_size", "warmup_fraction", "init_scale", "init_seed"}, "train");
      TrainConfig& tc = config->train;
      Take(t, "steps", &tc.steps);
      Take(t, "step_size", &tc.step_size);
      Take(t, "warmup_fraction", &tc.warmup_fraction);
      Take(t, "init_scale", &tc.init_scale);
      Take(t, "init_seed", &tc.init_seed);
    }
    Take(root, "eval_utterances", &config->eval_utterances);
    Take(root, "eval_seed", &config->eval_seed);
    Take(root, "betas", &config->betas);
    Take(root, "report_beta", &config->report_beta);
    if (variant != nullptr) {
      Take(root, "variant", &variant->name);
      if (root.contains("lambda")) variant->lambda = root.at("lambda").get<double>();
      if (root.contains("k")) variant->k = root.at("k").get<int>();
    } else if (root.contains("variant") || root.contains("lambda") || root.contains("k")) {
      throw UsageError("variant keys are not accepted by this command");
    }
    if (root.contains("skip_beta")) {
      if (skip_beta == nullptr) throw UsageError("skip_beta is not accepted by this command");
      if (root.at("skip_beta").is_null()) {
        skip_beta->reset();
      } else {
        *skip_beta = root.at("skip_beta").get<double>();
      }
    }
  } catch (const json::exception& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
}

void ValidateExperiment(const ExperimentConfig& config) {
  try {
    config.corpus.Validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  if (config.eval_utterances < 1) throw UsageError("eval_utterances must be >= 1");
  if (config.train.steps < 1) throw UsageError("steps must be >= 1");
  if (!(config.train.step_size > 0.0) || !std::isfinite(config.train.step_size)) {
    throw UsageError("step_size must be positive");
  }
  if (!(config.train.warmup_fraction >= 0.0 && config.train.warmup_fraction <= 1.0)) {
    throw UsageError("warmup_fraction must lie in [0, 1]");
  }
  if (config.betas.empty()) throw UsageError("betas must not be empty");
  for (double b : config.betas) {
    if (!(b > 0.0 && b < 1.0)) throw UsageError("betas must lie in (0, 1)");
  }
  if (!(config.report_beta > 0.0 && config.report_beta < 1.0)) {
    throw UsageError("report_beta must lie in (0, 1)");
  }
}

void CheckBeta(double beta, const std::string& flag) {
  if (!(beta > 0.0 && beta < 1.0)) throw UsageError(flag + " must lie in (0, 1)");
}

void WriteExperimentOutputs(const fs::path& dir, const std::vector<ArmResult>& results,
                            const std::string& loss_file) {
  std::vector<ExperimentReport> reports;
  std::vector<std::string> names;
  std::vector<std::vector<double>> curves;
  for (const ArmResult& r : results) {
    reports.push_back(r.report);
    names.push_back(r.report.name);
    curves.push_back(r.training.loss_curve);
  }
  fs::create_directories(dir);
  WriteAtomically(dir / "report.csv", [&](std::ostream& os) { WriteReportCsv(reports, os); });
  WriteAtomically(dir / loss_file,
                  [&](std::ostream& os) { WriteLossCurveCsv(names, curves, os); });
  WriteAtomically(dir / "curves.csv", [&](std::ostream& os) { WriteCurvesCsv(reports, os); });
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted-FST CTC toolkit with blank regularization and frame skipping",
               "blankreg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "blankreg 0.1.0");

  // topo build
  CLI::App* topo = app.add_subcommand("topo", "CTC topology graphs");
  topo->require_subcommand(1);
  CLI::App* topo_build = topo->add_subcommand("build", "Emit H, or HL when --labels is given");
  VariantFlags topo_variant;
  int topo_vocab = 0;
  std::optional<std::string> topo_labels;
  std::string topo_out;
  AddVariantFlags(topo_build, &topo_variant);
  topo_build->add_option("--vocab", topo_vocab, "Number of non-blank symbols")->required();
  topo_build->add_option("--labels", topo_labels, "Label sequence, e.g. A,B or 1,2");
  topo_build->add_option("--out", topo_out, "Output file (default stdout)");

  // loss
  CLI::App* loss = app.add_subcommand("loss", "CTC loss of a label sequence on a score grid");
  VariantFlags loss_variant;
  std::string loss_labels;
  std::string loss_grid;
  bool loss_grad = false;
  bool loss_logits = false;
  std::string loss_out;
  AddVariantFlags(loss, &loss_variant);
  loss->add_option("--labels", loss_labels, "Label sequence")->required();
  loss->add_option("--grid", loss_grid, "Matrix file, T x (V+1), blank in column 0")->required();
  loss->add_flag("--grad", loss_grad, "Also print the gradient w.r.t. logits");
  loss->add_flag("--logits", loss_logits, "Grid holds raw logits; normalize rows first");
  loss->add_option("--out", loss_out, "Output file (default stdout)");

  // align
  CLI::App* align = app.add_subcommand("align", "Enumerate every valid alignment");
  VariantFlags align_variant;
  std::string align_labels;
  int align_frames = 0;
  std::optional<int> align_vocab;
  AddVariantFlags(align, &align_variant);
  align->add_option("--labels", align_labels, "Label sequence")->required();
  align->add_option("--frames", align_frames, "Number of frames T")->required();
  align->add_option("--vocab", align_vocab, "Number of non-blank symbols (default: largest label)");

  // grad-check
  CLI::App* grad_check = app.add_subcommand("grad-check", "Finite-difference gradient check");
  VariantFlags gc_variant;
  std::string gc_labels;
  int gc_frames = 0;
  std::optional<int> gc_vocab;
  uint64_t gc_seed = 1;
  int gc_trials = 1;
  double gc_eps = 1e-5;
  double gc_tol = 1e-4;
  AddVariantFlags(grad_check, &gc_variant);
  grad_check->add_option("--labels", gc_labels, "Label sequence")->required();
  grad_check->add_option("--frames", gc_frames, "Number of frames T")->required();
  grad_check->add_option("--vocab", gc_vocab, "Number of non-blank symbols");
  grad_check->add_option("--seed", gc_seed, "Seed for the random logits");
  grad_check->add_option("--trials", gc_trials, "Independent random logit draws");
  grad_check->add_option("--eps", gc_eps, "Central-difference step");
  grad_check->add_option("--tol", gc_tol, "Largest accepted relative error");

  // skip analyze
  CLI::App* skip = app.add_subcommand("skip", "Blank-frame skipping analysis");
  skip->require_subcommand(1);
  CLI::App* skip_analyze = skip->add_subcommand("analyze", "Reduction ratio per threshold");
  std::vector<std::string> skip_probs;
  std::optional<double> skip_beta;
  std::optional<std::string> skip_sweep;
  std::vector<long> skip_tokens;
  std::string skip_out;
  skip_analyze->add_option("--probs", skip_probs, "Posterior matrix files, blank in column 0")
      ->required();
  auto* beta_opt = skip_analyze->add_option("--beta", skip_beta, "Single threshold");
  auto* sweep_opt = skip_analyze->add_option("--sweep", skip_sweep, "Comma-separated thresholds");
  beta_opt->excludes(sweep_opt);
  skip_analyze->add_option("--tokens", skip_tokens,
                           "Label count per file (default: greedy decode length)");
  skip_analyze->add_option("--out", skip_out, "Output CSV (default stdout)");

  // train-toy
  CLI::App* train = app.add_subcommand("train-toy", "Train one variant on the synthetic corpus");
  VariantFlags train_variant;
  std::optional<double> train_skip;
  std::string train_config;
  std::string train_out;
  std::optional<int> train_steps;
  std::optional<uint64_t> train_seed;
  AddVariantFlags(train, &train_variant);
  train->add_option("--skip-beta", train_skip, "Drop frames with blank prob above this");
  train->add_option("--steps", train_steps, "Gradient steps");
  train->add_option("--seed", train_seed, "Training corpus seed");
  train->add_option("--config", train_config, "JSON config; its values override flags");
  train->add_option("--out", train_out, "Output directory")->required();

  // compare
  CLI::App* compare = app.add_subcommand("compare", "Train and evaluate the reference arms");
  std::string compare_config;
  std::string compare_out;
  std::optional<int> compare_steps;
  compare->add_option("--steps", compare_steps, "Gradient steps per arm");
  compare->add_option("--config", compare_config, "JSON config; its values override flags");
  compare->add_option("--out", compare_out, "Output directory (default: report to stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  try {
    if (topo_build->parsed()) {
      const TopologyVariant variant = ToVariant(topo_variant);
      if (topo_vocab < 1) throw UsageError("--vocab must be >= 1");
      Fst fst;
      if (topo_labels) {
        fst = BuildTrainingGraph(ParseLabels(*topo_labels), topo_vocab, variant);
      } else {
        fst = BuildTopology(topo_vocab, variant);
      }
      Emit(topo_out, out, [&](std::ostream& os) { WriteFstText(fst, os); });
    } else if (loss->parsed()) {
      const TopologyVariant variant = ToVariant(loss_variant);
      const LabelSequence labels = ParseLabels(loss_labels);
      const Matrix m = ReadMatrixFile(loss_grid);
      const LossResult r = loss_logits ? CtcLossFromLogits(labels, m, variant)
                                       : CtcLoss(labels, DenseGrid(m), variant);
      Emit(loss_out, out, [&](std::ostream& os) {
        os << FormatDouble(r.loss) << "\n";
        if (loss_grad) WriteMatrixText(r.grad_logits, os);
      });
    } else if (align->parsed()) {
      const TopologyVariant variant = ToVariant(align_variant);
      const LabelSequence labels = ParseLabels(align_labels);
      int vocab = align_vocab.value_or(0);
      if (!align_vocab) {
        for (Label l : labels) vocab = std::max(vocab, static_cast<int>(l));
        vocab = std::max(vocab, 1);
      }
      if (align_frames < 1) throw UsageError("--frames must be >= 1");
      const auto alignments = EnumerateAlignments(labels, align_frames, vocab, variant);
      if (alignments.empty()) {
        throw InfeasibleAlignment(align_frames, static_cast<int>(labels.size()),
                                  variant.ToString());
      }
      for (const auto& a : alignments) {
        for (size_t t = 0; t < a.size(); ++t) out << (t ? " " : "") << a[t];
        out << "\n";
      }
    } else if (grad_check->parsed()) {
      const TopologyVariant variant = ToVariant(gc_variant);
      const LabelSequence labels = ParseLabels(gc_labels);
      int vocab = gc_vocab.value_or(0);
      if (!gc_vocab) {
        for (Label l : labels) vocab = std::max(vocab, static_cast<int>(l));
        vocab = std::max(vocab, 1);
      }
      if (gc_frames < 1) throw UsageError("--frames must be >= 1");
      if (gc_trials < 1) throw UsageError("--trials must be >= 1");
      if (!(gc_eps > 0.0)) throw UsageError("--eps must be positive");
      std::mt19937_64 rng(gc_seed);
      std::normal_distribution<double> gauss(0.0, 1.0);
      double worst = 0.0;
      for (int trial = 0; trial < gc_trials; ++trial) {
        Matrix logits(gc_frames, vocab + 1);
        for (double& v : logits.data()) v = gauss(rng);
        worst = std::max(worst, GradCheck(labels, logits, variant, gc_eps));
      }
      out << "max_rel_error " << FormatDouble(worst) << "\n";
      if (!(worst < gc_tol)) {
        err << "error: gradient check failed, relative error " << FormatDouble(worst)
            << " >= " << FormatDouble(gc_tol) << "\n";
        return kExitDomainError;
      }
    } else if (skip_analyze->parsed()) {
      std::vector<double> betas;
      if (skip_beta) {
        CheckBeta(*skip_beta, "--beta");
        betas = {*skip_beta};
      } else if (skip_sweep) {
        betas = ParseDoubles(*skip_sweep, "--sweep");
        for (double b : betas) CheckBeta(b, "--sweep");
      } else {
        betas.assign(std::begin(kDefaultSweepBetas), std::end(kDefaultSweepBetas));
      }
      if (!skip_tokens.empty() && skip_tokens.size() != skip_probs.size()) {
        throw UsageError("--tokens needs one count per --probs file");
      }
      std::vector<std::vector<double>> blank;
      std::vector<long> counts;
      for (size_t i = 0; i < skip_probs.size(); ++i) {
        const Matrix m = ReadMatrixFile(skip_probs[i]);
        if (m.cols() < 2) throw InvalidArgument("'" + skip_probs[i] + "' needs >= 2 columns");
        std::vector<double> col(m.rows());
        for (int t = 0; t < m.rows(); ++t) col[t] = m(t, kBlank);
        blank.push_back(std::move(col));
        if (!skip_tokens.empty()) {
          counts.push_back(skip_tokens[i]);
        } else {
          LabelSequence decoded;
          for (int t = 0, prev = -1; t < m.rows(); ++t) {
            auto row = m.Row(t);
            const int best = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
            if (best != kBlank && best != prev) decoded.push_back(best);
            prev = best;
          }
          counts.push_back(static_cast<long>(decoded.size()));
        }
      }
      const auto rows = SweepThresholds(blank, counts, betas);
      Emit(skip_out, out, [&](std::ostream& os) { WriteSweepCsv(rows, os); });
    } else if (train->parsed()) {
      ExperimentConfig config;
      if (train_steps) config.train.steps = *train_steps;
      if (train_seed) config.corpus.seed = *train_seed;
      if (!train_config.empty()) {
        ApplyConfigFile(train_config, &config, &train_variant, &train_skip);
      }
      const TopologyVariant variant = ToVariant(train_variant);
      if (train_skip) CheckBeta(*train_skip, "--skip-beta");
      ValidateExperiment(config);
      const ExperimentArm arm{ArmLabel(variant, train_skip), variant, train_skip};
      const std::vector<ArmResult> results = CompareVariants(config, {arm});
      const fs::path dir(train_out);
      WriteExperimentOutputs(dir, results, "loss_curve.csv");
      WriteAtomically(dir / "model.txt",
                      [&](std::ostream& os) { WriteModel(results[0].training.model, os); });
      WriteReportCsv({results[0].report}, out);
    } else if (compare->parsed()) {
      ExperimentConfig config;
      if (compare_steps) config.train.steps = *compare_steps;
      if (!compare_config.empty()) ApplyConfigFile(compare_config, &config, nullptr, nullptr);
      ValidateExperiment(config);
      const std::vector<ArmResult> results = CompareVariants(config, ReferenceArms());
      if (!compare_out.empty()) WriteExperimentOutputs(compare_out, results, "loss_curves.csv");
      std::vector<ExperimentReport> reports;
      for (const ArmResult& r : results) reports.push_back(r.report);
      WriteReportCsv(reports, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace blankreg::cli
