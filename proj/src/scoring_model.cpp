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
#include "curriculum/scoring_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace curriculum::scoring {
namespace {

std::vector<double> trained_losses(const Dataset &train_on, const Dataset &score_on,
                                   const nn::ModelSpec &spec, const nn::TrainConfig &base,
                                   std::uint64_t seed) {
  Rng init_rng(seed, streams::kInit);
  nn::TrainConfig cfg = base;
  cfg.seed = seed;
  nn::check_compatible(spec, train_on);
  nn::ModelParams params = nn::train(nn::init_model(spec, init_rng), train_on, cfg);
  return nn::per_sample_loss(params, score_on);
}

ScoreVector single_run(const Dataset &d, const ScoringRunConfig &cfg, std::uint64_t seed) {
  if (cfg.cross_validated) {
    return cross_validated_scores(d, cfg, seed);
  }
  return losses_to_scores(trained_losses(d, d, cfg.scorer_spec, cfg.train_cfg, seed));
}

}  // namespace

void ScoringRunConfig::validate() const {
  nn::validate_spec(scorer_spec);
  train_cfg.validate();
  if (ensemble_runs == 0) {
    raise(ErrorCode::kInvalidConfig, "ensemble_runs must be at least 1");
  }
}

ScoreVector losses_to_scores(std::span<const double> losses) {
  if (losses.empty()) {
    raise(ErrorCode::kEmptyInput, "no losses to convert");
  }
  std::vector<double> inverted(losses.size());
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (!std::isfinite(losses[i]) || losses[i] < 0.0) {
      raise(ErrorCode::kInvalidScores, "losses must be finite and non-negative");
    }
    inverted[i] = 1.0 / std::max(losses[i], kLossFloor);
  }
  return ScoreVector::normalize(inverted);
}

ScoreVector self_thought_scores(const Dataset &d, const ScoringRunConfig &cfg, std::uint64_t seed) {
  cfg.validate();
  if (cfg.cross_validated) {
    raise(ErrorCode::kInvalidConfig, "self-thought scoring trains on the full dataset");
  }
  return losses_to_scores(trained_losses(d, d, cfg.scorer_spec, cfg.train_cfg, seed));
}

bool scorer_is_larger(const nn::ModelSpec &scorer, const nn::ModelSpec &trainee) {
  return scorer.parameter_count() > trainee.parameter_count();
}

ScoreVector transfer_scores(const Dataset &d, const ScoringRunConfig &cfg,
                            const nn::ModelSpec &trainee_spec, std::uint64_t seed) {
  if (!scorer_is_larger(cfg.scorer_spec, trainee_spec)) {
    warn("SpecNotLarger: transfer scorer has " + std::to_string(cfg.scorer_spec.parameter_count()) +
         " parameters, trainee has " + std::to_string(trainee_spec.parameter_count()));
  }
  ScoringRunConfig plain = cfg;
  plain.cross_validated = false;
  return self_thought_scores(d, plain, seed);
}

CrossValidatedLosses cross_validated_losses(const Dataset &d, const ScoringRunConfig &cfg,
                                            std::uint64_t seed) {
  cfg.validate();
  Rng split_rng(seed, streams::kSplit);
  const Halves halves = stratified_halves(d, split_rng);

  const auto first_losses = trained_losses(halves.second, halves.first, cfg.scorer_spec,
                                           cfg.train_cfg, derive_seed(seed, {"half", "second"}));
  const auto second_losses = trained_losses(halves.first, halves.second, cfg.scorer_spec,
                                            cfg.train_cfg, derive_seed(seed, {"half", "first"}));

  CrossValidatedLosses out;
  out.losses.assign(d.size(), -1.0);
  out.half.assign(d.size(), -1);
  out.scored_by.assign(d.size(), -1);
  auto scatter = [&out](const std::vector<std::size_t> &indices, const std::vector<double> &losses,
                        int half, int model) {
    for (std::size_t j = 0; j < indices.size(); ++j) {
      const std::size_t i = indices[j];
      if (out.half[i] != -1) {
        raise(ErrorCode::kShapeMismatch, "sample " + std::to_string(i) + " placed in both halves");
      }
      out.losses[i] = losses[j];
      out.half[i] = half;
      out.scored_by[i] = model;
    }
  };
  // The model trained on the second half scores the first half and vice versa.
  scatter(halves.first_indices, first_losses, 0, 1);
  scatter(halves.second_indices, second_losses, 1, 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (out.half[i] == -1 || out.half[i] == out.scored_by[i]) {
      raise(ErrorCode::kShapeMismatch, "sample " + std::to_string(i) + " not held out");
    }
  }
  return out;
}

ScoreVector cross_validated_scores(const Dataset &d, const ScoringRunConfig &cfg,
                                   std::uint64_t seed) {
  return losses_to_scores(cross_validated_losses(d, cfg, seed).losses);
}

ScoreVector ensemble_scores(std::span<const ScoreVector> runs) {
  if (runs.empty()) {
    raise(ErrorCode::kEmptyList, "no score vectors to combine");
  }
  const std::size_t n = runs.front().size();
  std::vector<double> mean(n, 0.0);
  for (const auto &run : runs) {
    if (run.size() != n) {
      raise(ErrorCode::kLengthMismatch, "score vectors differ in length");
    }
  }
  // Summing each entry in sorted order makes the result independent of the
  // order of `runs`, bit for bit.
  std::vector<double> column(runs.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < runs.size(); ++r) {
      column[r] = runs[r][i];
    }
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (double v : column) {
      sum += v;
    }
    mean[i] = sum / static_cast<double>(runs.size());
  }
  return ScoreVector::normalize(mean);
}

ScoreVector invert_scores(const ScoreVector &s) {
  std::vector<double> inverted(s.size());
  std::transform(s.begin(), s.end(), inverted.begin(),
                 [](double w) { return 1.0 / std::max(w, kScoreFloor); });
  return ScoreVector::normalize(inverted);
}

ScoreVector model_scores(const Dataset &d, const ScoringRunConfig &cfg, std::uint64_t seed) {
  cfg.validate();
  if (cfg.ensemble_runs == 1) {
    return single_run(d, cfg, seed);
  }
  std::vector<ScoreVector> runs;
  runs.reserve(cfg.ensemble_runs);
  for (std::size_t r = 0; r < cfg.ensemble_runs; ++r) {
    runs.push_back(single_run(d, cfg, derive_seed(seed, "member", r)));
  }
  return ensemble_scores(runs);
}

void write_scores(const ScoreVector &s, const std::string &path) {
  std::ofstream out(path);
  if (!out) {
    raise(ErrorCode::kIoError, "cannot write " + path);
  }
  char buffer[64];
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", s[i]);
    out << i << '\t' << buffer << '\n';
  }
  if (!out) {
    raise(ErrorCode::kIoError, "failed writing " + path);
  }
}

ScoreVector read_scores(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    raise(ErrorCode::kIoError, "cannot read " + path);
  }
  std::vector<double> weights;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::istringstream row(line);
    std::size_t index = 0;
    double value = 0.0;
    if (!(row >> index >> value) || index != weights.size()) {
      raise(ErrorCode::kParseError, path + ": expected row " + std::to_string(weights.size()));
    }
    weights.push_back(value);
  }
  return ScoreVector(std::move(weights));
}

}  // namespace curriculum::scoring
