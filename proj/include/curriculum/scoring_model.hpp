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
#ifndef CURRICULUM_SCORING_MODEL_HPP_
#define CURRICULUM_SCORING_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "curriculum/core.hpp"
#include "curriculum/nn.hpp"

namespace curriculum::scoring {

/// Losses below this are raised to it before inversion.
inline constexpr double kLossFloor = 1e-8;
/// Scores below this are raised to it before inversion.
inline constexpr double kScoreFloor = 1e-12;

struct ScoringRunConfig {
  nn::ModelSpec scorer_spec;
  nn::TrainConfig train_cfg;
  std::size_t ensemble_runs = 5;
  bool cross_validated = false;

  void validate() const;
};

/// k_i = 1 / max(loss_i, 1e-8), normalized. Throws EmptyInput.
ScoreVector losses_to_scores(std::span<const double> losses);

/// Trains one scorer on all of d and scores every sample by its final loss.
/// Requires cfg.cross_validated == false.
ScoreVector self_thought_scores(const Dataset &d, const ScoringRunConfig &cfg, std::uint64_t seed);

/// True when the scorer has more trainable parameters than the trainee.
bool scorer_is_larger(const nn::ModelSpec &scorer, const nn::ModelSpec &trainee);

/// Same pipeline as self-thought scoring with a separate scorer architecture.
/// Emits a SpecNotLarger warning when the scorer is not larger than the
/// trainee, then computes anyway.
ScoreVector transfer_scores(const Dataset &d, const ScoringRunConfig &cfg,
                            const nn::ModelSpec &trainee_spec, std::uint64_t seed);

/// Held-out losses with their bookkeeping: half[i] is the half sample i was
/// placed in and scored_by[i] the half whose model produced its loss.
struct CrossValidatedLosses {
  std::vector<double> losses;
  std::vector<int> half;
  std::vector<int> scored_by;
};

CrossValidatedLosses cross_validated_losses(const Dataset &d, const ScoringRunConfig &cfg,
                                            std::uint64_t seed);

/// Splits d into stratified halves, trains one scorer per half and scores
/// each sample with the model that did not see it.
ScoreVector cross_validated_scores(const Dataset &d, const ScoringRunConfig &cfg,
                                   std::uint64_t seed);

/// Entrywise mean of equally long score vectors, renormalized.
ScoreVector ensemble_scores(std::span<const ScoreVector> runs);

/// Reciprocal inversion: k_i = 1 / max(s_i, 1e-12), normalized. Reverses the
/// easiness ranking.
ScoreVector invert_scores(const ScoreVector &s);

/// cfg.ensemble_runs independent scoring runs (plain or cross-validated per
/// cfg), each with its own initial weights and split, averaged. A single run
/// returns that run's scores unchanged.
ScoreVector model_scores(const Dataset &d, const ScoringRunConfig &cfg, std::uint64_t seed);

/// `index<TAB>score` rows, one per sample, with round-trip precision.
void write_scores(const ScoreVector &s, const std::string &path);
ScoreVector read_scores(const std::string &path);

}  // namespace curriculum::scoring

#endif  // CURRICULUM_SCORING_MODEL_HPP_
