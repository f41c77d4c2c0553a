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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "blankreg/blank_skip.h"
#include "blankreg/ctc_loss.h"
#include "blankreg/errors.h"
#include "blankreg/lattice.h"
#include "blankreg/oracle.h"
#include "blankreg/topology.h"
#include "blankreg/toy_train.h"
#include "cli.h"
#include "test_util.h"

namespace blankreg {
namespace {

namespace fs = std::filesystem;
using testing::AllLabelSequences;
using testing::PathLabelSet;
using testing::RandomGrid;
using testing::RandomLabels;
using testing::RandomLogits;
using testing::ReferenceVariants;
using testing::Seq;
using testing::UniformGrid;

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string Fmt(const char* format, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), format, a);
  return buf;
}

// Loss or +inf when no alignment exists.
double LossOrInf(const LabelSequence& labels, const DenseGrid& grid, const TopologyVariant& v) {
  try {
    return CtcLoss(labels, grid, v).loss;
  } catch (const InfeasibleAlignment&) {
    return std::numeric_limits<double>::infinity();
  }
}

bool SameLoss(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol;
}

Verdict OracleEquivalence() {
  std::mt19937_64 rng(101);
  long cases = 0;
  double worst = 0.0;
  Verdict v;
  for (int vocab = 1; vocab <= 3; ++vocab) {
    for (const LabelSequence& labels : AllLabelSequences(3, vocab)) {
      for (int frames = 1; frames <= 6; ++frames) {
        const DenseGrid grid = RandomGrid(rng, frames, vocab + 1);
        for (const TopologyVariant& variant : ReferenceVariants()) {
          ++cases;
          const double lattice_loss = LossOrInf(labels, grid, variant);
          const double brute = BruteForceLoss(labels, grid, variant);
          if (!SameLoss(lattice_loss, brute, 1e-9)) v.pass = false;
          if (std::isfinite(brute)) worst = std::max(worst, std::abs(lattice_loss - brute));

          const Lattice lat = IntersectDense(BuildTrainingGraph(labels, vocab, variant), grid);
          const auto oracle = EnumerateAlignments(labels, frames, vocab, variant);
          const std::set<std::vector<Label>> expected(oracle.begin(), oracle.end());
          if (PathLabelSet(lat) != expected || expected.size() != oracle.size()) v.pass = false;
        }
      }
    }
  }
  v.detail = std::to_string(cases) + " cases, max |loss - brute force| " + Fmt("%.3g", worst);
  return v;
}

Verdict ClassicRecursion() {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> vocab_dist(1, 10);
  std::uniform_int_distribution<int> len_dist(0, 8);
  double worst = 0.0;
  Verdict v;
  for (int i = 0; i < 200; ++i) {
    const int vocab = vocab_dist(rng);
    const LabelSequence labels = RandomLabels(rng, len_dist(rng), vocab);
    const int min_frames = std::max(1, MinAlignmentLength(labels));
    const int frames = std::uniform_int_distribution<int>(min_frames, 20)(rng);
    const DenseGrid grid = RandomGrid(rng, frames, vocab + 1);
    const double diff = std::abs(CtcLoss(labels, grid, TopologyVariant::Standard()).loss -
                                 CtcLossAlpha(labels, grid));
    worst = std::max(worst, diff);
  }
  v.pass = worst <= 1e-9;
  v.detail = "200 instances, max diff " + Fmt("%.3g", worst);
  return v;
}

Verdict GradientCorrectness() {
  std::mt19937_64 rng(303);
  double worst = 0.0;
  int instances = 0;
  for (const TopologyVariant& variant : ReferenceVariants()) {
    for (int i = 0; i < 50; ++i) {
      const int vocab = std::uniform_int_distribution<int>(1, 4)(rng);
      const LabelSequence labels =
          RandomLabels(rng, std::uniform_int_distribution<int>(1, 3)(rng), vocab);
      // Hard(1) needs distinct neighbours or a blank between repeats; the
      // minimum length already accounts for that.
      const int min_frames = MinAlignmentLength(labels);
      const int frames = std::uniform_int_distribution<int>(min_frames, min_frames + 5)(rng);
      const Matrix logits = RandomLogits(rng, frames, vocab + 1);
      worst = std::max(worst, GradCheck(labels, logits, variant, 1e-5));
      ++instances;
    }
  }
  Verdict v;
  v.pass = worst < 1e-4;
  v.detail = std::to_string(instances) + " instances, max relative error " + Fmt("%.3g", worst);
  return v;
}

Verdict ClosedForms() {
  const DenseGrid grid = UniformGrid(3, 3);
  const LabelSequence ab = Seq("AB");
  const double standard = CtcLoss(ab, grid, TopologyVariant::Standard()).loss;
  const double soft = CtcLoss(ab, grid, TopologyVariant::Soft(0.05)).loss;
  const double hard = CtcLoss(ab, grid, TopologyVariant::Hard(1)).loss;
  const double e1 = std::abs(standard + std::log(5.0 / 27.0));
  const double e2 = std::abs(soft + std::log((3.0 + 2.0 * std::exp(-0.05)) / 27.0));
  const double e3 = std::abs(hard - std::log(9.0));
  Verdict v;
  v.pass = e1 <= 1e-9 && e2 <= 1e-9 && e3 <= 1e-9;
  v.detail = "standard " + Fmt("%.12f", standard) + ", soft(0.05) " + Fmt("%.12f", soft) +
             ", hard(1) " + Fmt("%.12f", hard);
  return v;
}

Verdict GammaMaxFormula() {
  const double g = GammaMax(5, 20);
  Verdict v;
  v.pass = g == 0.75;
  v.detail = "gamma_max(5, 20) = " + Fmt("%.17g", g) + "; corpus reference constant " +
             Fmt("%.4f", kLibriSpeechGammaMax) + " (documented, not reproduced)";
  return v;
}

const ArmResult& FindArm(const std::vector<ArmResult>& results, const std::string& name) {
  for (const ArmResult& r : results) {
    if (r.report.name == name) return r;
  }
  throw std::runtime_error("missing arm " + name);
}

Verdict RatioOrdering(const std::vector<ArmResult>& results) {
  auto ratio = [&](const char* name) { return FindArm(results, name).report.reduction_ratio; };
  const double skip = ratio("standard+skip");
  const double hard2 = ratio("hard-2");
  const double hard1 = ratio("hard-1");
  const double soft_small = ratio("soft-0.04");
  const double soft_large = ratio("soft-5");
  const double gamma = FindArm(results, "hard-1").report.gamma_max;
  Verdict v;
  v.pass = skip < hard2 && hard2 < hard1 && soft_small < soft_large &&
           std::abs(hard1 - gamma) <= 0.05 && std::abs(soft_large - gamma) <= 0.05;
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "standard+skip %.4f < hard-2 %.4f < hard-1 %.4f; soft-0.04 %.4f < soft-5 %.4f; "
                "gamma_max %.4f",
                skip, hard2, hard1, soft_small, soft_large, gamma);
  v.detail = buf;
  return v;
}

Verdict CurveMonotonicity(const std::vector<ArmResult>& results) {
  Verdict v;
  for (const ArmResult& r : results) {
    const auto& curve = r.report.curve;
    for (size_t i = 1; i < curve.size(); ++i) {
      if (!(curve[i].ratio <= curve[i - 1].ratio)) {
        v.pass = false;
        v.detail += r.report.name + " rises at beta " + Fmt("%g", curve[i].beta) + "; ";
      }
    }
  }
  if (v.pass) v.detail = std::to_string(results.size()) + " curves non-increasing over the sweep";
  return v;
}

Verdict QualityPreservation() {
  ExperimentConfig config;
  config.corpus.noise = 0.0;
  const std::vector<ExperimentArm> arms = {
      {"standard", TopologyVariant::Standard(), std::nullopt},
      {"soft-0.04", TopologyVariant::Soft(0.04), std::nullopt},
      {"hard-2", TopologyVariant::Hard(2), std::nullopt},
  };
  const auto results = CompareVariants(config, arms);
  Verdict v;
  for (const ArmResult& r : results) {
    if (r.report.token_error_rate != 0.0) v.pass = false;
    v.detail += r.report.name + " TER " + Fmt("%.4f", r.report.token_error_rate) + "; ";
  }
  return v;
}

Verdict Degeneracies(const ExperimentConfig& config, const std::vector<double>& standard_curve) {
  const SyntheticCorpus corpus = GenerateCorpus(config.corpus);
  TrainConfig tc = config.train;
  double worst = 0.0;
  bool same_length = true;
  for (const TopologyVariant& variant :
       {TopologyVariant::Soft(0.0), TopologyVariant::Hard(corpus.MaxFrames())}) {
    tc.variant = variant;
    const TrainResult r = Train(corpus, tc);
    same_length = same_length && r.loss_curve.size() == standard_curve.size();
    for (size_t s = 0; s < std::min(r.loss_curve.size(), standard_curve.size()); ++s) {
      worst = std::max(worst, std::abs(r.loss_curve[s] - standard_curve[s]));
    }
  }
  Verdict v;
  v.pass = same_length && worst <= 1e-9;
  v.detail = "soft(0), hard(" + std::to_string(corpus.MaxFrames()) +
             ") vs standard over " + std::to_string(standard_curve.size()) +
             " steps, max diff " + Fmt("%.3g", worst);
  return v;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict Determinism() {
  const fs::path root = fs::temp_directory_path() / "blankreg_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  {
    std::ofstream cfg(root / "config.json");
    cfg << R"({"corpus": {"num_utterances": 30, "seed": 11}, "eval_utterances": 10,
               "train": {"steps": 100}, "variant": "standard", "skip_beta": 0.9})";
  }
  std::vector<std::string> outputs;
  std::vector<std::string> files = {"report.csv", "loss_curve.csv", "curves.csv", "model.txt"};
  Verdict v;
  for (const char* run : {"a", "b"}) {
    std::ostringstream out, err;
    const int code = cli::Run(
        {"train-toy", "--config", (root / "config.json").string(), "--out", (root / run).string()},
        out, err);
    if (code != 0) {
      v.pass = false;
      v.detail = "train-toy failed: " + err.str();
      return v;
    }
    std::string all = out.str();
    for (const std::string& f : files) all += Slurp(root / run / f);
    outputs.push_back(all);
  }
  v.pass = outputs[0] == outputs[1] && !outputs[0].empty();
  v.detail = "two seeded train-toy runs, " + std::to_string(outputs[0].size()) +
             " bytes of output, " + (v.pass ? "identical" : "different");
  fs::remove_all(root);
  return v;
}

int Report(int id, const std::string& name, const std::function<Verdict()>& body, int* failures) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%s] %2d %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", id, name.c_str(),
              v.detail.c_str(), secs);
  std::fflush(stdout);
  if (!v.pass) ++*failures;
  return v.pass;
}

}  // namespace
}  // namespace blankreg

int main() {
  using namespace blankreg;
  int failures = 0;
  Report(1, "oracle equivalence", OracleEquivalence, &failures);
  Report(2, "classic recursion equivalence", ClassicRecursion, &failures);
  Report(3, "gradient correctness", GradientCorrectness, &failures);
  Report(4, "closed-form values", ClosedForms, &failures);
  Report(5, "gamma_max formula", GammaMaxFormula, &failures);

  const ExperimentConfig reference;
  std::vector<ArmResult> results;
  std::string training_error;
  const auto start = std::chrono::steady_clock::now();
  try {
    results = CompareVariants(reference, ReferenceArms());
  } catch (const std::exception& e) {
    training_error = e.what();
  }
  const double train_secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("       reference comparison trained in %.1fs\n", train_secs);
  auto needs_training = [&](std::function<Verdict()> body) {
    return [&, body]() -> Verdict {
      if (!training_error.empty()) return {false, "training failed: " + training_error};
      return body();
    };
  };
  Report(6, "reduction ratio ordering", needs_training([&] { return RatioOrdering(results); }),
         &failures);
  Report(7, "sweep monotonicity", needs_training([&] { return CurveMonotonicity(results); }),
         &failures);
  Report(8, "quality preservation", QualityPreservation, &failures);
  Report(9, "identity degeneracies", needs_training([&] {
           return Degeneracies(reference, FindArm(results, "standard").training.loss_curve);
         }),
         &failures);
  Report(10, "determinism", Determinism, &failures);

  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
