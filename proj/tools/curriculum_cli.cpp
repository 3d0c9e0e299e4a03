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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curriculum/experiment.hpp"
#include "curriculum/report.hpp"
#include "curriculum/scoring_model.hpp"

namespace {

using namespace curriculum;
using namespace curriculum::harness;

struct Overrides {
  std::string config_path;
  std::string data_path;
  std::string labels_path;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> ensemble_runs;
  std::vector<std::string> methods;
  std::string cache_dir;

  void attach(CLI::App *cmd) {
    cmd->add_option("-c,--config", config_path, "Experiment config (JSON)");
    cmd->add_option("--data", data_path, "Training data file when no config is given");
    cmd->add_option("--labels", labels_path, "IDX label file");
    cmd->add_option("--format", format, "Data format: idx, csv or tsv_text");
    cmd->add_option("--seed", seed, "Master seed");
    cmd->add_option("--trials", trials, "Trials per method");
    cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
    cmd->add_option("--epochs", epochs, "Fixed epoch budget (skips calibration)");
    cmd->add_option("--ensemble-runs", ensemble_runs, "Members of ensemble scorers");
    cmd->add_option("--methods", methods, "Methods to run")->delimiter(',');
    cmd->add_option("--cache-dir", cache_dir, "Score cache directory");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      cfg = load_config(config_path);
    } else if (!data_path.empty()) {
      cfg.dataset.kind = SourceKind::kFiles;
      cfg.dataset.train.format = parse_format(format);
      cfg.dataset.train.path = data_path;
      cfg.dataset.train.labels_path = labels_path;
      cfg.methods = {"vanilla"};
    } else {
      cfg.methods = {"vanilla"};
    }
    if (seed) cfg.master_seed = *seed;
    if (trials) cfg.trials = *trials;
    if (threads) cfg.threads = *threads;
    if (epochs) {
      cfg.budget.mode = EpochBudget::Mode::kFixed;
      cfg.budget.epochs = *epochs;
    }
    if (ensemble_runs) cfg.ensemble_runs = *ensemble_runs;
    if (!methods.empty()) cfg.methods = methods;
    if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
    cfg.validate();
    return cfg;
  }
};

std::string default_output_dir() {
  const char *env = std::getenv(kOutputDirEnv);
  return env != nullptr && *env != '\0' ? env : "curriculum_out";
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Curriculum learning trainer and experiment runner"};
  app.require_subcommand(1);

  Overrides score_opts;
  std::string scoring_id;
  std::string score_out;
  auto *score = app.add_subcommand("score", "Compute a score vector and write index<TAB>score rows");
  score_opts.attach(score);
  score->add_option("--scoring", scoring_id, "Scoring function id (st, ecvst, tl, ug_high, ...)")
      ->required();
  score->add_option("-o,--out", score_out, "Output file")->required();

  Overrides train_opts;
  std::string train_method;
  std::size_t train_trial = 0;
  std::string train_out;
  auto *train = app.add_subcommand("train", "Run one method for one trial");
  train_opts.attach(train);
  train->add_option("-m,--method", train_method, "Method id (vanilla, rand-cl, ecvst-pcl, ...)")
      ->required();
  train->add_option("--trial", train_trial, "Trial index");
  train->add_option("-o,--out", train_out, "Output directory");

  Overrides exp_opts;
  std::string exp_out;
  auto *experiment = app.add_subcommand("experiment", "Run every method for every trial");
  exp_opts.attach(experiment);
  experiment->add_option("-o,--out", exp_out, "Output directory");

  std::string report_in;
  std::string report_out;
  auto *report = app.add_subcommand("report", "Re-render tables from a traces file");
  report->add_option("-i,--in", report_in, "Directory holding traces.jsonl")->required();
  report->add_option("-o,--out", report_out, "Output directory (defaults to --in)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (score->parsed()) {
      ExperimentConfig cfg = score_opts.resolve();
      const PreparedData data = prepare_data(cfg.dataset, cfg.master_seed);
      std::size_t epochs = cfg.budget.epochs;
      if (cfg.budget.mode == EpochBudget::Mode::kCalibrated) {
        nn::TrainConfig calib = cfg.train;
        calib.seed = plan_seeds(cfg).calibration;
        epochs = calibrate_epochs(data.train, trainee_spec(cfg, data.train), calib,
                                  cfg.budget.patience, cfg.budget.multiplier, cfg.budget.max_epochs)
                     .budget;
      }
      const ScoreVector s =
          compute_scores(scoring_id, cfg, data, epochs, plan_seeds(cfg).scoring(scoring_id));
      scoring::write_scores(s, score_out);
      std::cout << "wrote " << s.size() << " scores to " << score_out << '\n';
    } else if (train->parsed()) {
      ExperimentConfig cfg = train_opts.resolve();
      const RunRecord record = run_single(cfg, train_method, train_trial);
      Report r;
      r.trials = cfg.trials;
      r.methods = {train_method};
      r.runs = {record};
      r.summaries = summarize(r.methods, r.runs);
      const std::string out = train_out.empty() ? default_output_dir() : train_out;
      write_report(r, out);
      if (!record.ok()) {
        std::cerr << "run failed: " << record.error << '\n';
        return 1;
      }
      std::cout << train_method << " trial " << train_trial << ": max accuracy "
                << record.max_accuracy << '\n';
    } else if (experiment->parsed()) {
      ExperimentConfig cfg = exp_opts.resolve();
      const Report r = run_experiment(cfg);
      const std::string out = exp_out.empty() ? default_output_dir() : exp_out;
      write_report(r, out);
      std::cout << "epoch budget " << r.epoch_budget << "\n" << render_table(r);
      for (const auto &run : r.runs) {
        if (!run.ok()) {
          std::cerr << run.method << " trial " << run.trial << " failed: " << run.error << '\n';
        }
      }
    } else if (report->parsed()) {
      const Report r = read_report(report_in);
      const std::string out = report_out.empty() ? report_in : report_out;
      write_report(r, out);
      std::cout << render_table(r);
    }
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
