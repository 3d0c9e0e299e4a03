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
#ifndef CURRICULUM_TRAINERS_HPP_
#define CURRICULUM_TRAINERS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "curriculum/core.hpp"
#include "curriculum/nn.hpp"
#include "curriculum/pacing.hpp"

namespace curriculum::trainers {

/// Splits k across classes in proportion to class_sizes by largest
/// remainders, ties to the lower class index. Throws Infeasible when k
/// exceeds the total.
std::vector<std::size_t> stratified_quota(std::span<const std::size_t> class_sizes, std::size_t k);

/// Per class, the quota highest-scored samples (ties to the lower index).
/// Returned ascending.
std::vector<std::size_t> gcl_select(const ScoreVector &scores, std::span<const ClassIndex> labels,
                                    std::size_t class_count, std::size_t k);

/// Per class, quota samples drawn without replacement by successive draws
/// proportional to score. Zero-score samples become eligible only once the
/// positive-score samples of their class are used up, and are then drawn
/// uniformly. Returned ascending.
std::vector<std::size_t> pcl_select(const ScoreVector &scores, std::span<const ClassIndex> labels,
                                    std::size_t class_count, std::size_t k, Rng &rng);

/// Order-independent 64-bit hash of an index set.
std::uint64_t subset_digest(std::span<const std::size_t> indices);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  std::size_t subset_size = 0;
  std::uint64_t subset_digest = 0;
  double train_loss = 0.0;
  std::optional<double> eval_accuracy;

  bool operator==(const EpochRecord &) const = default;
};

struct TrainingTrace {
  std::vector<EpochRecord> epochs;
  nn::ModelParams final_params;
  double max_accuracy = 0.0;

  std::vector<std::size_t> subset_sizes() const;
};

struct CurriculumConfig {
  nn::ModelSpec spec;
  /// epochs, optimizer and the seed for initial weights and batch order.
  nn::TrainConfig train;
  /// Seed of the "pcl" selection stream.
  std::uint64_t selection_seed = 0;
  /// Evaluate every eval_stride epochs, and always after the last one.
  std::size_t eval_stride = 1;
};

/// Full dataset every epoch.
TrainingTrace vanilla_train(const Dataset &d, const CurriculumConfig &cfg, const Dataset &eval_set);

/// Greedy curriculum under the staircase schedule: each epoch trains on the
/// per-class top-scored samples of the scheduled size.
TrainingTrace gcl_train(const Dataset &d, const ScoreVector &scores, const CurriculumConfig &cfg,
                        const Dataset &eval_set);

/// Probabilistic curriculum under the staircase schedule: each epoch redraws
/// its subset in proportion to the scores.
TrainingTrace pcl_train(const Dataset &d, const ScoreVector &scores, const CurriculumConfig &cfg,
                        const Dataset &eval_set);

/// Greedy selection under an arbitrary schedule.
TrainingTrace gcl_train(const Dataset &d, const ScoreVector &scores, const CurriculumConfig &cfg,
                        const Dataset &eval_set, const PacingSchedule &schedule);

}  // namespace curriculum::trainers

#endif  // CURRICULUM_TRAINERS_HPP_
