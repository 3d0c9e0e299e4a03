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
#include "curriculum/trainers.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace curriculum::trainers {
namespace {

using Selector = std::function<std::vector<std::size_t>(std::size_t k)>;

void check_selection_inputs(const ScoreVector &scores, std::span<const ClassIndex> labels) {
  if (scores.size() != labels.size()) {
    raise(ErrorCode::kLengthMismatch, "scores and labels differ in length");
  }
}

TrainingTrace run(const Dataset &d, const CurriculumConfig &cfg, const Dataset &eval_set,
                  const PacingSchedule &schedule, const Selector &select) {
  validate_dataset(d);
  nn::check_compatible(cfg.spec, d);
  if (schedule.epochs() != cfg.train.epochs) {
    raise(ErrorCode::kLengthMismatch, "schedule length differs from the epoch count");
  }
  if (cfg.eval_stride == 0) {
    raise(ErrorCode::kInvalidConfig, "eval_stride must be at least 1");
  }
  Rng init_rng(cfg.train.seed, streams::kInit);
  nn::Trainer trainer(nn::init_model(cfg.spec, init_rng), cfg.train);

  TrainingTrace trace;
  trace.epochs.reserve(schedule.epochs());
  bool evaluated = false;
  for (std::size_t e = 0; e < schedule.epochs(); ++e) {
    const auto subset = select(schedule[e]);
    EpochRecord record;
    record.epoch = e + 1;
    record.subset_size = subset.size();
    record.subset_digest = subset_digest(subset);
    record.train_loss = trainer.run_epoch(d, subset);
    if ((e + 1) % cfg.eval_stride == 0 || e + 1 == schedule.epochs()) {
      const double accuracy = nn::evaluate(trainer.params(), eval_set);
      record.eval_accuracy = accuracy;
      trace.max_accuracy = evaluated ? std::max(trace.max_accuracy, accuracy) : accuracy;
      evaluated = true;
    }
    trace.epochs.push_back(record);
  }
  trace.final_params = std::move(trainer).release();
  return trace;
}

}  // namespace

std::vector<std::size_t> stratified_quota(std::span<const std::size_t> class_sizes, std::size_t k) {
  const std::size_t total = std::accumulate(class_sizes.begin(), class_sizes.end(), std::size_t{0});
  if (k > total) {
    raise(ErrorCode::kInfeasible, "cannot pick " + std::to_string(k) + " of " +
                                      std::to_string(total) + " samples");
  }
  std::vector<std::size_t> quota(class_sizes.size(), 0);
  if (total == 0) {
    return quota;
  }
  // Exact integer arithmetic: quota = floor(k n_c / N), remainder k n_c mod N.
  std::vector<std::size_t> remainder(class_sizes.size(), 0);
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < class_sizes.size(); ++c) {
    quota[c] = k * class_sizes[c] / total;
    remainder[c] = k * class_sizes[c] % total;
    assigned += quota[c];
  }
  std::vector<std::size_t> order(class_sizes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&remainder](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t j = 0; assigned < k; ++j) {
    ++quota[order[j]];
    ++assigned;
  }
  return quota;
}

std::vector<std::size_t> gcl_select(const ScoreVector &scores, std::span<const ClassIndex> labels,
                                    std::size_t class_count, std::size_t k) {
  check_selection_inputs(scores, labels);
  auto groups = indices_by_class(labels, class_count);
  std::vector<std::size_t> sizes;
  for (const auto &g : groups) {
    sizes.push_back(g.size());
  }
  const auto quota = stratified_quota(sizes, k);

  std::vector<std::size_t> selected;
  selected.reserve(k);
  for (std::size_t c = 0; c < class_count; ++c) {
    auto &members = groups[c];
    // members is ascending, so a stable sort keeps the lower index first on ties.
    std::stable_sort(members.begin(), members.end(),
                     [&scores](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    selected.insert(selected.end(), members.begin(),
                    members.begin() + static_cast<std::ptrdiff_t>(quota[c]));
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

std::vector<std::size_t> pcl_select(const ScoreVector &scores, std::span<const ClassIndex> labels,
                                    std::size_t class_count, std::size_t k, Rng &rng) {
  check_selection_inputs(scores, labels);
  const auto groups = indices_by_class(labels, class_count);
  std::vector<std::size_t> sizes;
  for (const auto &g : groups) {
    sizes.push_back(g.size());
  }
  const auto quota = stratified_quota(sizes, k);

  std::vector<std::size_t> selected;
  selected.reserve(k);
  for (std::size_t c = 0; c < class_count; ++c) {
    std::vector<std::size_t> positive;
    std::vector<std::size_t> zero;
    for (auto i : groups[c]) {
      (scores[i] > 0.0 ? positive : zero).push_back(i);
    }
    for (std::size_t draw = 0; draw < quota[c]; ++draw) {
      if (!positive.empty()) {
        double mass = 0.0;
        for (auto i : positive) {
          mass += scores[i];
        }
        const double target = rng.uniform() * mass;
        std::size_t pick = positive.size() - 1;
        double running = 0.0;
        for (std::size_t j = 0; j < positive.size(); ++j) {
          running += scores[positive[j]];
          if (target < running) {
            pick = j;
            break;
          }
        }
        selected.push_back(positive[pick]);
        positive.erase(positive.begin() + static_cast<std::ptrdiff_t>(pick));
      } else {
        const std::size_t pick = rng.index(zero.size());
        selected.push_back(zero[pick]);
        zero.erase(zero.begin() + static_cast<std::ptrdiff_t>(pick));
      }
    }
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

std::uint64_t subset_digest(std::span<const std::size_t> indices) {
  std::vector<std::size_t> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint64_t i : sorted) {
    for (int b = 0; b < 8; ++b) {
      h ^= (i >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::vector<std::size_t> TrainingTrace::subset_sizes() const {
  std::vector<std::size_t> sizes;
  sizes.reserve(epochs.size());
  for (const auto &e : epochs) {
    sizes.push_back(e.subset_size);
  }
  return sizes;
}

TrainingTrace vanilla_train(const Dataset &d, const CurriculumConfig &cfg, const Dataset &eval_set) {
  std::vector<std::size_t> all(d.size());
  std::iota(all.begin(), all.end(), 0);
  return run(d, cfg, eval_set, full_pacing(d.size(), cfg.train.epochs),
             [&all](std::size_t) { return all; });
}

TrainingTrace gcl_train(const Dataset &d, const ScoreVector &scores, const CurriculumConfig &cfg,
                        const Dataset &eval_set, const PacingSchedule &schedule) {
  if (scores.size() != d.size()) {
    raise(ErrorCode::kLengthMismatch, "scores are not aligned to the dataset");
  }
  const auto labels = d.labels();
  return run(d, cfg, eval_set, schedule, [&](std::size_t k) {
    return gcl_select(scores, labels, d.class_count(), k);
  });
}

TrainingTrace gcl_train(const Dataset &d, const ScoreVector &scores, const CurriculumConfig &cfg,
                        const Dataset &eval_set) {
  return gcl_train(d, scores, cfg, eval_set, staircase_pacing(d.size(), cfg.train.epochs));
}

TrainingTrace pcl_train(const Dataset &d, const ScoreVector &scores, const CurriculumConfig &cfg,
                        const Dataset &eval_set) {
  if (scores.size() != d.size()) {
    raise(ErrorCode::kLengthMismatch, "scores are not aligned to the dataset");
  }
  const auto labels = d.labels();
  Rng pcl_rng(cfg.selection_seed, streams::kPcl);
  return run(d, cfg, eval_set, staircase_pacing(d.size(), cfg.train.epochs),
             [&](std::size_t k) { return pcl_select(scores, labels, d.class_count(), k, pcl_rng); });
}

}  // namespace curriculum::trainers
