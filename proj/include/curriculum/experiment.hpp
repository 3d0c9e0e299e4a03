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
#ifndef CURRICULUM_EXPERIMENT_HPP_
#define CURRICULUM_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "curriculum/core.hpp"
#include "curriculum/dataset_io.hpp"
#include "curriculum/nn.hpp"
#include "curriculum/scoring_model.hpp"
#include "curriculum/synth.hpp"
#include "curriculum/trainers.hpp"

namespace curriculum::harness {

/// Environment variable naming the default output directory of the CLI.
inline constexpr const char *kOutputDirEnv = "CURRICULUM_OUTPUT_DIR";

enum class SourceKind { kBlobs, kSyntheticText, kFiles };

struct DatasetConfig {
  SourceKind kind = SourceKind::kBlobs;
  BlobSpec blobs;
  TextCorpusSpec text;
  /// Per-class size of the clean synthetic test set.
  std::size_t test_per_class = 150;
  DataSource train;
  /// When absent, a stratified 20% of the training file is held out.
  std::optional<DataSource> test;
};

struct EpochBudget {
  enum class Mode { kFixed, kCalibrated };
  Mode mode = Mode::kCalibrated;
  std::size_t epochs = 30;  // fixed mode
  std::size_t multiplier = 3;
  std::size_t patience = 5;
  std::size_t max_epochs = 200;
};

struct ExperimentConfig {
  DatasetConfig dataset;
  /// Method ids, e.g. "vanilla", "rand-cl", "ecvst-pcl", "anti-oracle-gcl",
  /// "ug_high-pcl", "st+sl_long-pcl".
  std::vector<std::string> methods;
  std::size_t trials = 5;
  std::uint64_t master_seed = 0;
  std::vector<std::size_t> hidden = {32};
  std::vector<std::size_t> scorer_hidden = {128, 64};
  std::size_t embedding_dim = 16;
  nn::TrainConfig train;  // train.epochs and train.seed are set by the harness
  EpochBudget budget;
  std::size_t ensemble_runs = 5;
  std::size_t eval_stride = 1;
  /// 0 uses the hardware concurrency.
  std::size_t threads = 1;
  /// Optional on-disk score cache.
  std::string cache_dir;

  void validate() const;
  static ExperimentConfig from_json(const nlohmann::json &j);
  nlohmann::json to_json() const;
};

ExperimentConfig load_config(const std::string &path);

enum class TrainerKind { kVanilla, kGcl, kPcl };

/// Parsed method id: [anti-]<scoring>-<gcl|pcl>, or vanilla / rand-cl.
struct Method {
  std::string id;
  std::string scoring;  // empty for vanilla
  TrainerKind trainer = TrainerKind::kVanilla;
  bool anti = false;
};

Method parse_method(const std::string &id);

/// Training and test data for one experiment, plus the clean mask when the
/// data is synthetic with label noise.
struct PreparedData {
  Dataset train;
  Dataset test;
  std::vector<bool> clean_mask;
};

PreparedData prepare_data(const DatasetConfig &cfg, std::uint64_t master_seed);

/// Trainee architecture for the dataset under the config.
nn::ModelSpec trainee_spec(const ExperimentConfig &cfg, const Dataset &d);
nn::ModelSpec scorer_spec(const ExperimentConfig &cfg, const Dataset &d);

/// Stratified split holding out round(fraction * N) samples.
struct Split {
  Dataset kept;
  Dataset held_out;
};
Split stratified_split(const Dataset &d, double held_out_fraction, Rng &rng);

struct Calibration {
  std::size_t best_epoch = 0;
  std::size_t budget = 0;
  std::vector<double> validation_accuracy;
};

/// Trains on a stratified 80% of d until validation accuracy has not
/// improved for `patience` epochs; the budget is multiplier x the best epoch
/// (at least 3).
Calibration calibrate_epochs(const Dataset &d, const nn::ModelSpec &spec, const nn::TrainConfig &cfg,
                             std::size_t patience, std::size_t multiplier, std::size_t max_epochs);

/// Score vector for a scoring id ("st", "ecvtl", "oracle", "rand",
/// "ug_high", "a+b", ...), before any anti-curriculum inversion.
ScoreVector compute_scores(const std::string &scoring, const ExperimentConfig &cfg,
                           const PreparedData &data, std::size_t epochs, std::uint64_t seed);

struct RunRecord {
  std::string method;
  std::size_t trial = 0;
  double max_accuracy = 0.0;
  std::vector<trainers::EpochRecord> epochs;
  std::string error;  // non-empty when the run failed

  bool ok() const { return error.empty(); }
  bool operator==(const RunRecord &) const = default;
};

struct MethodSummary {
  std::string method;
  std::vector<double> trial_accuracies;
  double mean = 0.0;
  double std_dev = 0.0;
  double delta_vs_vanilla = 0.0;
  double p_value = 1.0;

  bool operator==(const MethodSummary &) const = default;
};

struct Report {
  std::size_t epoch_budget = 0;
  std::size_t trials = 0;
  std::vector<std::string> methods;
  std::vector<RunRecord> runs;
  std::vector<MethodSummary> summaries;

  const MethodSummary &summary(const std::string &method) const;
  const RunRecord &run(const std::string &method, std::size_t trial) const;
  bool operator==(const Report &) const = default;
};

/// Two-sided paired sign-flip permutation test on the trial differences.
/// Exact for up to 16 pairs, seeded Monte Carlo beyond.
double paired_permutation_p_value(std::span<const double> a, std::span<const double> b);

/// Per-method statistics from raw runs. "vanilla" is the baseline.
std::vector<MethodSummary> summarize(const std::vector<std::string> &methods,
                                     const std::vector<RunRecord> &runs);

/// Seeds used by one experiment, keyed by role.
struct SeedPlan {
  std::uint64_t data;
  std::uint64_t calibration;
  std::vector<std::uint64_t> trial;  // trainee init and batch order, shared across methods
  std::uint64_t selection(const std::string &method, std::size_t trial) const;
  std::uint64_t scoring(const std::string &scoring) const;

  std::uint64_t master;
};

SeedPlan plan_seeds(const ExperimentConfig &cfg);

/// Throws InvalidConfig if two different (method, trial, stream) roles of
/// the experiment would share a seed.
void check_seed_uniqueness(const ExperimentConfig &cfg, const SeedPlan &plan);

Report run_experiment(const ExperimentConfig &cfg);

/// Runs a single (method, trial) pair of the experiment.
RunRecord run_single(const ExperimentConfig &cfg, const std::string &method, std::size_t trial);

}  // namespace curriculum::harness

#endif  // CURRICULUM_EXPERIMENT_HPP_
