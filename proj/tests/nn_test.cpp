/**
 * Copyright 2026 The Curriculum Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <cmath>
#include <filesystem>
#include <numeric>

#include <gtest/gtest.h>

#include "curriculum/nn.hpp"
#include "oracles/oracles.hpp"

namespace curriculum::nn {
namespace {

Dataset two_blobs(std::size_t per_class, Rng &rng) {
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const ClassIndex label = i % 2;
    const double center = label == 0 ? -2.0 : 2.0;
    samples.push_back({DenseFeatures{center + 0.3 * rng.normal(), center + 0.3 * rng.normal()}, label});
  }
  return Dataset(std::move(samples), 2, DataKind::kDense);
}

Dataset points(std::vector<DenseFeatures> xs, std::vector<ClassIndex> labels, std::size_t classes) {
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    samples.push_back({xs[i], labels[i]});
  }
  return Dataset(std::move(samples), classes, DataKind::kDense);
}

TEST(InitModel, DeterministicPerStream) {
  const ModelSpec spec{{4, 8, 3}};
  Rng a(1, streams::kInit);
  Rng b(1, streams::kInit);
  EXPECT_EQ(init_model(spec, a), init_model(spec, b));
}

TEST(InitModel, DifferentSeedsDiffer) {
  const ModelSpec spec{{4, 8, 3}};
  Rng a(1, streams::kInit);
  Rng b(2, streams::kInit);
  const auto pa = init_model(spec, a);
  const auto pb = init_model(spec, b);
  EXPECT_FALSE(pa == pb);
  EXPECT_TRUE(pa.all_finite());
}

TEST(InitModel, RejectsSingleLayer) {
  Rng rng(1, streams::kInit);
  try {
    init_model(ModelSpec{{4}}, rng);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidSpec);
  }
}

TEST(ModelSpec, ParameterCount) {
  EXPECT_EQ((ModelSpec{{4, 8, 3}}.parameter_count()), 4u * 8 + 8 + 8 * 3 + 3);
  EXPECT_EQ((ModelSpec{{5, 2}, 10}.parameter_count()), 10u * 5 + 5 * 2 + 2);
}

TEST(PerSampleLoss, CertainCorrectPredictionIsNearZero) {
  ModelParams p = ModelParams::zeros(ModelSpec{{2, 2}});
  p.layers[0].weights << 50.0, 0.0, 0.0, 50.0;
  const Dataset d = points({{1.0, 0.0}, {0.0, 1.0}}, {0, 1}, 2);
  for (double loss : per_sample_loss(p, d)) {
    EXPECT_LE(loss, 1e-9);
    EXPECT_GE(loss, 0.0);
  }
}

TEST(PerSampleLoss, UniformPredictorGivesLogClassCount) {
  const ModelParams p = ModelParams::zeros(ModelSpec{{3, 5, 4}});
  const Dataset d = points({{1, 2, 3}, {0, 0, 0}, {-1, 4, 2}, {7, 7, 7}}, {0, 1, 2, 3}, 4);
  for (double loss : per_sample_loss(p, d)) {
    EXPECT_NEAR(loss, std::log(4.0), 1e-12);
  }
}

TEST(PerSampleLoss, ClampsCertainWrongPrediction) {
  ModelParams p = ModelParams::zeros(ModelSpec{{1, 2}});
  p.layers[0].bias << 1000.0, 0.0;
  const Dataset d = points({{0.0}, {0.0}}, {1, 0}, 2);
  const auto losses = per_sample_loss(p, d);
  EXPECT_NEAR(losses[0], -std::log(1e-12), 1e-9);
  EXPECT_TRUE(std::isfinite(losses[0]));
}

TEST(PerSampleLoss, MatchesStraightLineOracle) {
  ModelParams p = ModelParams::zeros(ModelSpec{{2, 3, 2}});
  p.layers[0].weights << 0.5, -0.25, 0.1, 0.8, -0.6, 0.3;
  p.layers[0].bias << 0.05, -0.1, 0.2;
  p.layers[1].weights << 0.7, -0.4, 0.9, -0.3, 0.6, 0.2;
  p.layers[1].bias << 0.01, -0.02;
  const std::vector<DenseFeatures> xs = {{1.0, 2.0}, {-0.5, 0.25}, {3.0, -1.0}};
  const Dataset d = points(xs, {0, 1, 1}, 2);
  const auto losses = per_sample_loss(p, d);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_NEAR(losses[i], oracle::straight_line_loss(p, xs[i], d[i].label), 1e-10);
  }
}

TEST(PerSampleLoss, ShapeMismatch) {
  const ModelParams p = ModelParams::zeros(ModelSpec{{3, 2}});
  const Dataset d = points({{1.0, 2.0}, {0.0, 1.0}}, {0, 1}, 2);
  try {
    per_sample_loss(p, d);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
}

TEST(Evaluate, CountsCorrectArgmax) {
  ModelParams p = ModelParams::zeros(ModelSpec{{2, 2}});
  p.layers[0].weights << 1.0, 0.0, 0.0, 1.0;
  EXPECT_DOUBLE_EQ(evaluate(p, points({{1, 0}, {0, 1}}, {0, 1}, 2)), 1.0);
  EXPECT_DOUBLE_EQ(evaluate(p, points({{1, 0}, {0, 1}, {2, 0}, {3, 1}}, {0, 1, 0, 1}, 2)), 0.75);
}

TEST(Evaluate, ConstantPredictorOnBalancedSet) {
  ModelParams p = ModelParams::zeros(ModelSpec{{2, 2}});
  p.layers[0].bias << 1.0, 0.0;
  EXPECT_DOUBLE_EQ(evaluate(p, points({{1, 0}, {0, 1}, {2, 2}, {3, 1}}, {0, 1, 0, 1}, 2)), 0.5);
}

TEST(Evaluate, TiesGoToLowestClass) {
  const ModelParams p = ModelParams::zeros(ModelSpec{{2, 3}});
  EXPECT_DOUBLE_EQ(evaluate(p, points({{1, 0}, {0, 1}}, {0, 1}, 3)), 0.5);
}

TEST(Train, FitsSeparableBlobs) {
  Rng data_rng(3, "data");
  const Dataset d = two_blobs(20, data_rng);
  Rng init(3, streams::kInit);
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.batch_size = 8;
  cfg.learning_rate = 0.01;
  cfg.seed = 3;
  const ModelParams p = train(init_model(ModelSpec{{2, 8, 2}}, init), d, cfg);
  EXPECT_DOUBLE_EQ(evaluate(p, d), 1.0);
}

TEST(Train, RejectsZeroEpochs) {
  TrainConfig cfg;
  cfg.epochs = 0;
  try {
    cfg.validate();
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
  }
}

TEST(Train, DeterministicPerSeed) {
  Rng data_rng(4, "data");
  const Dataset d = two_blobs(10, data_rng);
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 3;
  cfg.seed = 99;
  Rng a(5, streams::kInit);
  Rng b(5, streams::kInit);
  EXPECT_EQ(train(init_model(ModelSpec{{2, 4, 2}}, a), d, cfg),
            train(init_model(ModelSpec{{2, 4, 2}}, b), d, cfg));
}

TEST(Train, UsesPerEpochSubsets) {
  Rng data_rng(4, "data");
  const Dataset d = two_blobs(10, data_rng);
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 4;
  Rng init(1, streams::kInit);
  const ModelParams start = init_model(ModelSpec{{2, 4, 2}}, init);
  const std::vector<std::vector<std::size_t>> subsets = {{0, 1, 2}, {0, 1, 2, 3, 4}};
  Trainer trainer(start, cfg);
  trainer.run_epoch(d, subsets[0]);
  trainer.run_epoch(d, subsets[1]);
  EXPECT_EQ(trainer.steps(), 1u + 2u);
  EXPECT_EQ(train(start, d, cfg, &subsets), trainer.params());

  const std::vector<std::vector<std::size_t>> wrong = {{0}};
  EXPECT_THROW(train(start, d, cfg, &wrong), Error);
}

TEST(Train, MeanLossDecreasesOnSeparableData) {
  Rng data_rng(8, "data");
  const Dataset d = two_blobs(20, data_rng);
  TrainConfig cfg;
  cfg.batch_size = 8;
  cfg.learning_rate = 0.01;
  Rng init(8, streams::kInit);
  Trainer trainer(init_model(ModelSpec{{2, 8, 2}}, init), cfg);
  const double first = trainer.run_epoch(d);
  double last = first;
  for (int e = 1; e < 50; ++e) {
    last = trainer.run_epoch(d);
  }
  EXPECT_LT(last, first);
}

TEST(Train, DivergenceIsReported) {
  const Dataset d = points({{1e300, 1e300}, {-1e300, -1e300}}, {0, 1}, 2);
  TrainConfig cfg;
  cfg.optimizer = OptimizerKind::kSgd;
  cfg.learning_rate = 1e10;
  Rng init(1, streams::kInit);
  try {
    train(init_model(ModelSpec{{2, 2}}, init), d, cfg);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFiniteLoss);
  }
}

TEST(GradientCheck, HiddenLayerNetwork) {
  Rng data_rng(10, "data");
  const Dataset d = oracle::random_dense(8, 4, 3, data_rng);
  Rng init(10, streams::kInit);
  EXPECT_LT(gradient_check(ModelSpec{{4, 6, 3}}, d, init), 1e-4);
}

TEST(GradientCheck, SoftmaxRegression) {
  Rng data_rng(11, "data");
  const Dataset d = oracle::random_dense(4, 2, 3, data_rng);
  Rng init(11, streams::kInit);
  EXPECT_LT(gradient_check(ModelSpec{{2, 3}}, d, init), 1e-6);
}

TEST(GradientCheck, AllZeroParameters) {
  Rng data_rng(12, "data");
  const Dataset d = oracle::random_dense(8, 4, 3, data_rng);
  const ModelParams zeros = ModelParams::zeros(ModelSpec{{4, 6, 3}});
  ModelParams grad;
  std::vector<std::size_t> all(d.size());
  std::iota(all.begin(), all.end(), 0);
  loss_and_gradient(zeros, d, all, &grad);
  EXPECT_EQ(grad.layers[0].weights.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT(gradient_check(zeros, d), 1e-4);
}

TEST(GradientCheck, RandomNetworksProperty) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed, "property");
    const std::size_t in = 2 + rng.index(4);
    const std::size_t hidden = 2 + rng.index(6);
    const std::size_t classes = 2 + rng.index(3);
    const Dataset d = oracle::random_dense(4 + rng.index(12), in, classes, rng);
    EXPECT_LT(gradient_check(ModelSpec{{in, hidden, classes}}, d, rng), 1e-4) << "seed " << seed;
  }
}

TEST(GradientCheck, EmbeddingAverageModel) {
  std::vector<Sample> samples = {{TokenSequence{1, 2, 2}, 0},
                                 {TokenSequence{3}, 1},
                                 {TokenSequence{4, 1, 3, 5}, 0},
                                 {TokenSequence{5, 5}, 1}};
  const Dataset d(std::move(samples), 2, DataKind::kText);
  Rng init(13, streams::kInit);
  EXPECT_LT(gradient_check(ModelSpec{{3, 4, 2}, 6}, d, init), 1e-4);
}

TEST(SaveLoad, RoundTripIsExact) {
  Rng init(14, streams::kInit);
  const ModelParams p = init_model(ModelSpec{{3, 5, 2}, 7}, init);
  const auto path = (std::filesystem::temp_directory_path() / "curriculum_nn_roundtrip.txt").string();
  save_params(p, path);
  EXPECT_EQ(load_params(path), p);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace curriculum::nn
