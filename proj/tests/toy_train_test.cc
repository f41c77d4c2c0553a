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

#include <cmath>
#include <limits>
#include <sstream>

#include "blankreg/errors.h"
#include "gtest/gtest.h"

namespace blankreg {
namespace {

CorpusConfig SmallCorpus() {
  CorpusConfig c;
  c.num_utterances = 24;
  c.seed = 5;
  return c;
}

TEST(CorpusTest, SeededGenerationIsDeterministic) {
  SyntheticCorpus a = GenerateCorpus(SmallCorpus());
  SyntheticCorpus b = GenerateCorpus(SmallCorpus());
  ASSERT_EQ(a.utterances.size(), b.utterances.size());
  for (size_t i = 0; i < a.utterances.size(); ++i) {
    EXPECT_EQ(a.utterances[i].features, b.utterances[i].features);
    EXPECT_EQ(a.utterances[i].labels, b.utterances[i].labels);
  }
  CorpusConfig other = SmallCorpus();
  other.seed = 6;
  EXPECT_NE(GenerateCorpus(other).utterances[0].features, a.utterances[0].features);
}

TEST(CorpusTest, ShapesAndDurations) {
  CorpusConfig c = SmallCorpus();
  SyntheticCorpus corpus = GenerateCorpus(c);
  for (const auto& u : corpus.utterances) {
    EXPECT_FALSE(u.labels.empty());
    EXPECT_EQ(u.labels.size(), u.durations.size());
    int total = 0;
    for (int d : u.durations) {
      EXPECT_GE(d, c.mean_stretch - 1);
      EXPECT_LE(d, c.mean_stretch + 1);
      total += d;
    }
    EXPECT_EQ(u.features.rows(), total);
    EXPECT_EQ(u.features.cols(), c.feature_dim);
    for (size_t i = 1; i < u.labels.size(); ++i) EXPECT_NE(u.labels[i], u.labels[i - 1]);
  }
}

TEST(CorpusTest, InvalidConfigsThrow) {
  auto with = [](auto mutate) {
    CorpusConfig c;
    mutate(c);
    return c;
  };
  EXPECT_THROW(GenerateCorpus(with([](CorpusConfig& c) { c.vocab_size = 1; })), InvalidArgument);
  EXPECT_THROW(GenerateCorpus(with([](CorpusConfig& c) { c.feature_dim = 5; })), InvalidArgument);
  EXPECT_THROW(GenerateCorpus(with([](CorpusConfig& c) { c.mean_stretch = 1; })), InvalidArgument);
  EXPECT_THROW(GenerateCorpus(with([](CorpusConfig& c) { c.noise = -1; })), InvalidArgument);
  EXPECT_THROW(GenerateCorpus(with([](CorpusConfig& c) { c.num_utterances = 0; })), InvalidArgument);
  EXPECT_THROW(GenerateCorpus(with([](CorpusConfig& c) { c.min_tokens = 0; })), InvalidArgument);
}

TEST(CorpusTest, NoiselessFramesAreNearestMeanSeparable) {
  CorpusConfig c = SmallCorpus();
  c.noise = 0.0;
  SyntheticCorpus corpus = GenerateCorpus(c);
  for (const auto& u : corpus.utterances) {
    int t = 0;
    for (size_t i = 0; i < u.labels.size(); ++i) {
      for (int j = 0; j < u.durations[i]; ++j, ++t) {
        // Nearest token mean: token k's mean is token_scale * e_{k-1}.
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= c.vocab_size; ++k) {
          double dist = 0.0;
          for (int d = 0; d < c.vocab_size; ++d) {
            double mean = (d == k - 1) ? c.token_scale : 0.0;
            double diff = u.features(t, d) - mean;
            dist += diff * diff;
          }
          if (dist < best_dist) {
            best_dist = dist;
            best = k;
          }
        }
        EXPECT_EQ(best, u.labels[i]);
      }
    }
  }
}

TEST(CorpusTest, GammaMaxNearThreeQuartersForStretchFour) {
  CorpusConfig c;
  c.num_utterances = 200;
  SyntheticCorpus corpus = GenerateCorpus(c);
  EXPECT_NEAR(corpus.GammaMax(), 0.75, 0.02);
  EXPECT_DOUBLE_EQ(corpus.GammaMax(),
                   1.0 - static_cast<double>(corpus.TotalTokens()) / corpus.TotalFrames());
}

TEST(TrainTest, StandardLossDecreases) {
  SyntheticCorpus corpus = GenerateCorpus(SmallCorpus());
  TrainConfig tc;
  tc.steps = 500;
  TrainResult r = Train(corpus, tc);
  ASSERT_EQ(r.loss_curve.size(), 500u);
  EXPECT_LT(r.loss_curve.back(), r.loss_curve.front());
  EXPECT_EQ(r.model.step_count, 500);
  EXPECT_TRUE(r.model.AllFinite());
}

TEST(TrainTest, DegenerateVariantsReproduceStandardCurve) {
  SyntheticCorpus corpus = GenerateCorpus(SmallCorpus());
  TrainConfig tc;
  tc.steps = 60;
  TrainResult standard = Train(corpus, tc);
  tc.variant = TopologyVariant::Soft(0.0);
  TrainResult soft = Train(corpus, tc);
  tc.variant = TopologyVariant::Hard(corpus.MaxFrames());
  TrainResult hard = Train(corpus, tc);
  for (size_t s = 0; s < standard.loss_curve.size(); ++s) {
    EXPECT_NEAR(soft.loss_curve[s], standard.loss_curve[s], 1e-9);
    EXPECT_NEAR(hard.loss_curve[s], standard.loss_curve[s], 1e-9);
  }
}

TEST(TrainTest, HardOneIsFeasibleOnDistinctAdjacentCorpus) {
  SyntheticCorpus corpus = GenerateCorpus(SmallCorpus());
  for (const auto& u : corpus.utterances) EXPECT_GE(u.features.rows(), static_cast<int>(u.labels.size()));
  TrainConfig tc;
  tc.variant = TopologyVariant::Hard(1);
  tc.steps = 20;
  EXPECT_NO_THROW(Train(corpus, tc));
}

TEST(TrainTest, InfeasibleUtteranceIsRejectedUpFront) {
  SyntheticCorpus corpus;
  corpus.config = SmallCorpus();
  Utterance u;
  u.labels = {1, 1};
  u.durations = {1, 1};
  u.features = Matrix(2, corpus.config.feature_dim);
  corpus.utterances.push_back(u);
  EXPECT_THROW(Train(corpus, TrainConfig{}), InfeasibleAlignment);
}

TEST(TrainTest, SkippingNeverHappensDuringWarmup) {
  SyntheticCorpus corpus = GenerateCorpus(SmallCorpus());
  TrainConfig tc;
  tc.steps = 200;
  tc.warmup_fraction = 0.25;
  tc.skip_beta = 0.6;
  TrainResult r = Train(corpus, tc);
  ASSERT_EQ(WarmupSteps(tc), 50);
  long after = 0;
  for (int s = 0; s < tc.steps; ++s) {
    if (s < 50) EXPECT_EQ(r.skipped_frames[s], 0) << s;
    else after += r.skipped_frames[s];
  }
  EXPECT_GT(after, 0);
}

TEST(TrainTest, BadConfigThrows) {
  SyntheticCorpus corpus = GenerateCorpus(SmallCorpus());
  TrainConfig tc;
  tc.steps = 0;
  EXPECT_THROW(Train(corpus, tc), InvalidArgument);
  tc = TrainConfig{};
  tc.skip_beta = 1.0;
  EXPECT_THROW(Train(corpus, tc), InvalidArgument);
  tc = TrainConfig{};
  tc.step_size = std::numeric_limits<double>::infinity();
  EXPECT_THROW(Train(corpus, tc), InvalidArgument);
}

TEST(TrainTest, HugeStepSizeDiverges) {
  SyntheticCorpus corpus = GenerateCorpus(SmallCorpus());
  TrainConfig tc;
  tc.steps = 50;
  tc.step_size = 1e308;
  EXPECT_THROW(Train(corpus, tc), TrainingDiverged);
}

TEST(EditDistanceTest, Basics) {
  EXPECT_EQ(EditDistance({1, 2, 3}, {1, 2, 3}), 0);
  EXPECT_EQ(EditDistance({1, 2, 3}, {1, 3}), 1);
  EXPECT_EQ(EditDistance({1, 2}, {2, 1}), 2);
  EXPECT_EQ(EditDistance({}, {4, 4}), 2);
}

TEST(EvaluateTest, ZeroModelHasUniformPosteriorsAndNoSkips) {
  SyntheticCorpus corpus = GenerateCorpus(SmallCorpus());
  ToyModel zero = InitModel(corpus.config.feature_dim, corpus.config.vocab_size, 0.0, 1);
  ExperimentReport r = Evaluate(zero, corpus, kDefaultSweepBetas);
  for (const auto& row : r.curve) EXPECT_EQ(row.ratio, 0.0);
  EXPECT_EQ(r.reduction_ratio, 0.0);
  EXPECT_EQ(r.retained_frames, corpus.TotalFrames());
  EXPECT_DOUBLE_EQ(r.gamma_max, corpus.GammaMax());
  // Uniform rows decode to all-blank, so every reference token is deleted.
  EXPECT_DOUBLE_EQ(r.token_error_rate, 1.0);
  for (double p : zero.BlankProbs(corpus.utterances[0].features)) {
    EXPECT_NEAR(p, 1.0 / (corpus.config.vocab_size + 1), 1e-15);
  }
}

TEST(CompareVariantsTest, SameArmTwiceGivesIdenticalRows) {
  ExperimentConfig cfg;
  cfg.corpus = SmallCorpus();
  cfg.eval_utterances = 8;
  cfg.train.steps = 40;
  ExperimentArm arm{"hard", TopologyVariant::Hard(2), std::nullopt};
  auto results = CompareVariants(cfg, {arm, arm});
  ASSERT_EQ(results.size(), 2u);
  std::ostringstream a, b;
  WriteReportCsv({results[0].report}, a);
  WriteReportCsv({results[1].report}, b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(results[0].training.loss_curve, results[1].training.loss_curve);
  for (size_t i = 1; i < results[0].report.curve.size(); ++i) {
    EXPECT_LE(results[0].report.curve[i].ratio, results[0].report.curve[i - 1].ratio);
  }
}

TEST(CsvTest, HeadersPresent) {
  ExperimentReport r;
  r.name = "x";
  r.curve = {{0.9, 0.5, 0.75}};
  std::ostringstream report, curves, loss;
  WriteReportCsv({r}, report);
  WriteCurvesCsv({r}, curves);
  WriteLossCurveCsv({"x"}, {{1.0, 0.5}}, loss);
  EXPECT_EQ(report.str().substr(0, report.str().find('\n')),
            "method,variant,skip_beta,final_loss,token_error_rate,reduction_ratio,gamma_max,"
            "retained_frames");
  EXPECT_EQ(curves.str(), "method,beta,ratio,gamma_max\nx,0.9,0.5,0.75\n");
  EXPECT_EQ(loss.str(), "step,x\n0,1\n1,0.5\n");
}

TEST(ArmLabelTest, Format) {
  EXPECT_EQ(ArmLabel(TopologyVariant::Standard(), 0.9), "standard+skip(0.9)");
  EXPECT_EQ(ArmLabel(TopologyVariant::Hard(2), std::nullopt), "hard(2)");
}

}  // namespace
}  // namespace blankreg
