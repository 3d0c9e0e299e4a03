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
#include "curriculum/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "curriculum/scoring_text.hpp"

namespace curriculum::harness {
namespace {

using nlohmann::json;

const std::set<std::string> kModelScorings = {"st", "est", "cvst", "ecvst",
                                              "tl", "etl", "cvtl", "ecvtl"};

bool is_text_scoring(const std::string &s) {
  static const std::set<std::string> kText = {"sl_long", "sl_short", "ug_high", "ug_low",
                                              "bg_high", "bg_low",   "tg_high", "tg_low"};
  return kText.count(s) > 0;
}

std::vector<std::string> split_plus(const std::string &scoring) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto plus = scoring.find('+', start);
    parts.push_back(scoring.substr(start, plus - start));
    if (plus == std::string::npos) {
      return parts;
    }
    start = plus + 1;
  }
}

void check_scoring(const std::string &scoring) {
  for (const auto &part : split_plus(scoring)) {
    if (part != "rand" && part != "oracle" && kModelScorings.count(part) == 0 &&
        !is_text_scoring(part)) {
      raise(ErrorCode::kInvalidConfig, "unknown scoring function \"" + part + "\"");
    }
  }
}

DataSource source_from_json(const json &j, const std::string &path_key, const std::string &labels_key) {
  DataSource s;
  s.format = parse_format(j.at("format").get<std::string>());
  s.path = j.at(path_key).get<std::string>();
  s.labels_path = j.value(labels_key, std::string());
  s.class_count = j.value("class_count", std::size_t{0});
  return s;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Everything a trial needs besides its seeds, computed once per experiment.
struct Context {
  ExperimentConfig cfg;
  PreparedData data;
  std::size_t budget = 0;
  SeedPlan seeds;
  nn::ModelSpec spec;
  std::map<std::string, ScoreVector> scores;
};

Context build_context(const ExperimentConfig &cfg, const std::vector<std::string> &methods) {
  cfg.validate();
  Context ctx{cfg, prepare_data(cfg.dataset, cfg.master_seed), 0, plan_seeds(cfg), {}, {}};
  ctx.spec = trainee_spec(cfg, ctx.data.train);
  check_seed_uniqueness(cfg, ctx.seeds);

  if (cfg.budget.mode == EpochBudget::Mode::kFixed) {
    ctx.budget = cfg.budget.epochs;
  } else {
    nn::TrainConfig calib = cfg.train;
    calib.seed = ctx.seeds.calibration;
    ctx.budget = calibrate_epochs(ctx.data.train, ctx.spec, calib, cfg.budget.patience,
                                  cfg.budget.multiplier, cfg.budget.max_epochs)
                     .budget;
  }

  for (const auto &id : methods) {
    const Method m = parse_method(id);
    if (m.scoring.empty() || ctx.scores.count(m.scoring) > 0) {
      continue;
    }
    ctx.scores.emplace(m.scoring, compute_scores(m.scoring, cfg, ctx.data, ctx.budget,
                                                 ctx.seeds.scoring(m.scoring)));
  }
  return ctx;
}

RunRecord execute(const Context &ctx, const std::string &id, std::size_t trial) {
  RunRecord record;
  record.method = id;
  record.trial = trial;
  try {
    const Method m = parse_method(id);
    trainers::CurriculumConfig run_cfg;
    run_cfg.spec = ctx.spec;
    run_cfg.train = ctx.cfg.train;
    run_cfg.train.epochs = ctx.budget;
    run_cfg.train.seed = ctx.seeds.trial.at(trial);
    run_cfg.selection_seed = ctx.seeds.selection(id, trial);
    run_cfg.eval_stride = ctx.cfg.eval_stride;

    trainers::TrainingTrace trace;
    if (m.trainer == TrainerKind::kVanilla) {
      trace = trainers::vanilla_train(ctx.data.train, run_cfg, ctx.data.test);
    } else {
      const ScoreVector &base = ctx.scores.at(m.scoring);
      const ScoreVector scores = m.anti ? scoring::invert_scores(base) : base;
      trace = m.trainer == TrainerKind::kGcl
                  ? trainers::gcl_train(ctx.data.train, scores, run_cfg, ctx.data.test)
                  : trainers::pcl_train(ctx.data.train, scores, run_cfg, ctx.data.test);
    }
    record.max_accuracy = trace.max_accuracy;
    record.epochs = std::move(trace.epochs);
  } catch (const std::exception &e) {
    record.error = e.what();
    if (record.error.empty()) {
      record.error = "unknown failure";
    }
  }
  return record;
}

std::vector<std::string> with_vanilla(std::vector<std::string> methods) {
  if (std::find(methods.begin(), methods.end(), "vanilla") == methods.end()) {
    methods.insert(methods.begin(), "vanilla");
  }
  return methods;
}

}  // namespace

// Config

void ExperimentConfig::validate() const {
  if (trials == 0) {
    raise(ErrorCode::kInvalidConfig, "trials must be at least 1");
  }
  if (methods.empty()) {
    raise(ErrorCode::kInvalidConfig, "no methods to run");
  }
  for (const auto &m : methods) {
    parse_method(m);
  }
  if (eval_stride == 0 || ensemble_runs == 0) {
    raise(ErrorCode::kInvalidConfig, "eval_stride and ensemble_runs must be at least 1");
  }
  if (budget.mode == EpochBudget::Mode::kFixed && budget.epochs < 3) {
    raise(ErrorCode::kInvalidConfig, "a fixed epoch budget must be at least 3");
  }
  if (budget.mode == EpochBudget::Mode::kCalibrated &&
      (budget.patience == 0 || budget.multiplier == 0 || budget.max_epochs == 0)) {
    raise(ErrorCode::kInvalidConfig, "calibration needs positive patience, multiplier and max_epochs");
  }
  nn::TrainConfig probe = train;
  probe.epochs = 1;
  probe.validate();
}

ExperimentConfig ExperimentConfig::from_json(const json &j) {
  ExperimentConfig cfg;
  try {
    const json &ds = j.at("dataset");
    const std::string kind = ds.value("kind", std::string("gaussian_blobs"));
    cfg.dataset.test_per_class = ds.value("test_per_class", cfg.dataset.test_per_class);
    if (kind == "gaussian_blobs") {
      cfg.dataset.kind = SourceKind::kBlobs;
      auto &b = cfg.dataset.blobs;
      b.classes = ds.value("classes", b.classes);
      b.per_class = ds.value("per_class", b.per_class);
      b.dim = ds.value("dim", b.dim);
      b.sigma = ds.value("sigma", b.sigma);
      b.noise_fraction = ds.value("noise_fraction", b.noise_fraction);
    } else if (kind == "synthetic_text") {
      cfg.dataset.kind = SourceKind::kSyntheticText;
      auto &t = cfg.dataset.text;
      t.classes = ds.value("classes", t.classes);
      t.per_class = ds.value("per_class", t.per_class);
      t.min_length = ds.value("min_length", t.min_length);
      t.max_length = ds.value("max_length", t.max_length);
      t.topic_words = ds.value("topic_words", t.topic_words);
      t.rare_fraction = ds.value("rare_fraction", t.rare_fraction);
    } else if (kind == "files") {
      cfg.dataset.kind = SourceKind::kFiles;
      cfg.dataset.train = source_from_json(ds, "train", "train_labels");
      if (ds.contains("test")) {
        cfg.dataset.test = source_from_json(ds, "test", "test_labels");
      }
    } else {
      raise(ErrorCode::kInvalidConfig, "unknown dataset kind \"" + kind + "\"");
    }

    cfg.methods = j.at("methods").get<std::vector<std::string>>();
    cfg.trials = j.value("trials", cfg.trials);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    if (j.contains("model")) {
      cfg.hidden = j["model"].value("hidden", cfg.hidden);
      cfg.embedding_dim = j["model"].value("embedding_dim", cfg.embedding_dim);
    }
    if (j.contains("scorer")) {
      cfg.scorer_hidden = j["scorer"].value("hidden", cfg.scorer_hidden);
    }
    if (j.contains("train")) {
      const json &t = j["train"];
      cfg.train.batch_size = t.value("batch_size", cfg.train.batch_size);
      cfg.train.learning_rate = t.value("learning_rate", cfg.train.learning_rate);
      const std::string opt = t.value("optimizer", std::string("adam"));
      if (opt == "adam") {
        cfg.train.optimizer = nn::OptimizerKind::kAdam;
      } else if (opt == "sgd") {
        cfg.train.optimizer = nn::OptimizerKind::kSgd;
      } else {
        raise(ErrorCode::kInvalidConfig, "unknown optimizer \"" + opt + "\"");
      }
      cfg.train.adam.beta1 = t.value("beta1", cfg.train.adam.beta1);
      cfg.train.adam.beta2 = t.value("beta2", cfg.train.adam.beta2);
      cfg.train.adam.epsilon = t.value("epsilon", cfg.train.adam.epsilon);
    }
    if (j.contains("epoch_budget")) {
      const json &b = j["epoch_budget"];
      const std::string mode = b.value("mode", std::string("calibrated"));
      if (mode == "fixed") {
        cfg.budget.mode = EpochBudget::Mode::kFixed;
      } else if (mode == "calibrated") {
        cfg.budget.mode = EpochBudget::Mode::kCalibrated;
      } else {
        raise(ErrorCode::kInvalidConfig, "unknown epoch budget mode \"" + mode + "\"");
      }
      cfg.budget.epochs = b.value("epochs", cfg.budget.epochs);
      cfg.budget.multiplier = b.value("multiplier", cfg.budget.multiplier);
      cfg.budget.patience = b.value("patience", cfg.budget.patience);
      cfg.budget.max_epochs = b.value("max_epochs", cfg.budget.max_epochs);
    }
    cfg.ensemble_runs = j.value("ensemble_runs", cfg.ensemble_runs);
    cfg.eval_stride = j.value("eval_stride", cfg.eval_stride);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.cache_dir = j.value("cache_dir", cfg.cache_dir);
  } catch (const json::exception &e) {
    raise(ErrorCode::kParseError, std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

json ExperimentConfig::to_json() const {
  json ds;
  ds["test_per_class"] = dataset.test_per_class;
  auto source = [](const DataSource &s, json &out, const char *path_key, const char *labels_key) {
    out["format"] = std::string(to_string(s.format));
    out[path_key] = s.path;
    if (!s.labels_path.empty()) {
      out[labels_key] = s.labels_path;
    }
    out["class_count"] = s.class_count;
  };
  switch (dataset.kind) {
    case SourceKind::kBlobs:
      ds["kind"] = "gaussian_blobs";
      ds["classes"] = dataset.blobs.classes;
      ds["per_class"] = dataset.blobs.per_class;
      ds["dim"] = dataset.blobs.dim;
      ds["sigma"] = dataset.blobs.sigma;
      ds["noise_fraction"] = dataset.blobs.noise_fraction;
      break;
    case SourceKind::kSyntheticText:
      ds["kind"] = "synthetic_text";
      ds["classes"] = dataset.text.classes;
      ds["per_class"] = dataset.text.per_class;
      ds["min_length"] = dataset.text.min_length;
      ds["max_length"] = dataset.text.max_length;
      ds["topic_words"] = dataset.text.topic_words;
      ds["rare_fraction"] = dataset.text.rare_fraction;
      break;
    case SourceKind::kFiles:
      ds["kind"] = "files";
      source(dataset.train, ds, "train", "train_labels");
      if (dataset.test) {
        json test;
        source(*dataset.test, test, "test", "test_labels");
        ds["test"] = test["test"];
        if (test.contains("test_labels")) {
          ds["test_labels"] = test["test_labels"];
        }
      }
      break;
  }
  json j;
  j["dataset"] = ds;
  j["methods"] = methods;
  j["trials"] = trials;
  j["master_seed"] = master_seed;
  j["model"] = {{"hidden", hidden}, {"embedding_dim", embedding_dim}};
  j["scorer"] = {{"hidden", scorer_hidden}};
  j["train"] = {{"batch_size", train.batch_size},
                {"learning_rate", train.learning_rate},
                {"optimizer", train.optimizer == nn::OptimizerKind::kAdam ? "adam" : "sgd"},
                {"beta1", train.adam.beta1},
                {"beta2", train.adam.beta2},
                {"epsilon", train.adam.epsilon}};
  if (budget.mode == EpochBudget::Mode::kFixed) {
    j["epoch_budget"] = {{"mode", "fixed"}, {"epochs", budget.epochs}};
  } else {
    j["epoch_budget"] = {{"mode", "calibrated"},
                         {"multiplier", budget.multiplier},
                         {"patience", budget.patience},
                         {"max_epochs", budget.max_epochs}};
  }
  j["ensemble_runs"] = ensemble_runs;
  j["eval_stride"] = eval_stride;
  j["threads"] = threads;
  j["cache_dir"] = cache_dir;
  return j;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    raise(ErrorCode::kIoError, "cannot read " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    raise(ErrorCode::kParseError, path + ": " + e.what());
  }
  return ExperimentConfig::from_json(j);
}

Method parse_method(const std::string &id) {
  Method m;
  m.id = id;
  if (id == "vanilla") {
    return m;
  }
  if (id == "rand-cl") {
    m.scoring = "rand";
    m.trainer = TrainerKind::kPcl;
    return m;
  }
  std::string rest = id;
  if (rest.rfind("anti-", 0) == 0) {
    m.anti = true;
    rest = rest.substr(5);
  }
  const auto dash = rest.rfind('-');
  if (dash == std::string::npos || dash == 0) {
    raise(ErrorCode::kInvalidConfig, "method \"" + id + "\" should look like <scoring>-<gcl|pcl>");
  }
  const std::string trainer = rest.substr(dash + 1);
  if (trainer == "gcl") {
    m.trainer = TrainerKind::kGcl;
  } else if (trainer == "pcl") {
    m.trainer = TrainerKind::kPcl;
  } else {
    raise(ErrorCode::kInvalidConfig, "unknown trainer \"" + trainer + "\" in \"" + id + "\"");
  }
  m.scoring = rest.substr(0, dash);
  check_scoring(m.scoring);
  return m;
}

// Data

Split stratified_split(const Dataset &d, double held_out_fraction, Rng &rng) {
  const auto held = static_cast<std::size_t>(std::llround(held_out_fraction * static_cast<double>(d.size())));
  const auto quota = trainers::stratified_quota(d.class_sizes(), held);
  auto groups = indices_by_class(d.labels(), d.class_count());
  std::vector<bool> out(d.size(), false);
  for (std::size_t c = 0; c < groups.size(); ++c) {
    rng.shuffle(std::span<std::size_t>(groups[c]));
    for (std::size_t j = 0; j < quota[c]; ++j) {
      out[groups[c][j]] = true;
    }
  }
  std::vector<std::size_t> kept;
  std::vector<std::size_t> held_out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    (out[i] ? held_out : kept).push_back(i);
  }
  return {d.subset(kept), d.subset(held_out)};
}

PreparedData prepare_data(const DatasetConfig &cfg, std::uint64_t master_seed) {
  const std::uint64_t seed = derive_seed(master_seed, {"data"});
  PreparedData out;
  switch (cfg.kind) {
    case SourceKind::kBlobs: {
      Rng train_rng(seed, "train");
      auto train = synth_dataset(cfg.blobs, train_rng);
      BlobSpec test_spec = cfg.blobs;
      test_spec.noise_fraction = 0.0;
      test_spec.per_class = cfg.test_per_class;
      Rng test_rng(seed, "test");
      out.train = std::move(train.data);
      out.clean_mask = std::move(train.clean_mask);
      out.test = synth_dataset(test_spec, test_rng).data;
      break;
    }
    case SourceKind::kSyntheticText: {
      Rng train_rng(seed, "train");
      auto train = synth_text_corpus(cfg.text, train_rng);
      TextCorpusSpec test_spec = cfg.text;
      test_spec.per_class = cfg.test_per_class;
      Rng test_rng(seed, "test");
      const auto test = synth_text_corpus(test_spec, test_rng);
      // Re-encode the test sentences with the training vocabulary.
      const Vocabulary &vocab = *train.data.vocabulary();
      std::vector<Sample> samples;
      for (std::size_t i = 0; i < test.lines.size(); ++i) {
        TokenSequence tokens;
        for (const auto &t : text::tokenize(test.lines[i]).tokens) {
          tokens.push_back(vocab.lookup(t));
        }
        samples.push_back({std::move(tokens), test.data[i].label});
      }
      out.test = Dataset(std::move(samples), cfg.text.classes, DataKind::kText,
                         train.data.vocabulary());
      out.train = std::move(train.data);
      break;
    }
    case SourceKind::kFiles: {
      auto vocab = std::make_shared<Vocabulary>();
      Dataset train = load_dataset(cfg.train, vocab, true);
      if (cfg.test) {
        DataSource test_source = *cfg.test;
        if (test_source.class_count == 0) {
          test_source.class_count = train.class_count();
        }
        out.test = load_dataset(test_source, vocab, false);
        out.train = std::move(train);
      } else {
        validate_dataset(train);
        Rng split_rng(seed, streams::kSplit);
        auto split = stratified_split(train, 0.2, split_rng);
        out.train = std::move(split.kept);
        out.test = std::move(split.held_out);
      }
      break;
    }
  }
  validate_dataset(out.train);
  if (out.test.empty()) {
    raise(ErrorCode::kEmptyDataset, "test set is empty");
  }
  return out;
}

nn::ModelSpec trainee_spec(const ExperimentConfig &cfg, const Dataset &d) {
  nn::ModelSpec spec;
  if (d.kind() == DataKind::kText) {
    spec.vocab_size = d.vocabulary() ? d.vocabulary()->size() : 0;
    spec.layer_sizes.push_back(cfg.embedding_dim);
  } else {
    spec.layer_sizes.push_back(d.feature_dim());
  }
  spec.layer_sizes.insert(spec.layer_sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
  spec.layer_sizes.push_back(d.class_count());
  nn::validate_spec(spec);
  return spec;
}

nn::ModelSpec scorer_spec(const ExperimentConfig &cfg, const Dataset &d) {
  ExperimentConfig larger = cfg;
  larger.hidden = cfg.scorer_hidden;
  return trainee_spec(larger, d);
}

Calibration calibrate_epochs(const Dataset &d, const nn::ModelSpec &spec, const nn::TrainConfig &cfg,
                             std::size_t patience, std::size_t multiplier, std::size_t max_epochs) {
  if (patience == 0 || multiplier == 0 || max_epochs == 0) {
    raise(ErrorCode::kInvalidConfig, "calibration needs positive patience, multiplier and max_epochs");
  }
  Rng split_rng(cfg.seed, streams::kSplit);
  const Split split = stratified_split(d, 0.2, split_rng);
  if (split.kept.empty() || split.held_out.empty()) {
    raise(ErrorCode::kTooSmall, "dataset too small for a validation split");
  }
  Rng init_rng(cfg.seed, streams::kInit);
  nn::Trainer trainer(nn::init_model(spec, init_rng), cfg);

  Calibration out;
  double best = -1.0;
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= max_epochs && since_best < patience; ++epoch) {
    trainer.run_epoch(split.kept);
    const double accuracy = nn::evaluate(trainer.params(), split.held_out);
    out.validation_accuracy.push_back(accuracy);
    if (accuracy > best) {
      best = accuracy;
      out.best_epoch = epoch;
      since_best = 0;
    } else {
      ++since_best;
    }
  }
  out.budget = std::max<std::size_t>(3, multiplier * out.best_epoch);
  return out;
}

ScoreVector compute_scores(const std::string &scoring, const ExperimentConfig &cfg,
                           const PreparedData &data, std::size_t epochs, std::uint64_t seed) {
  const auto parts = split_plus(scoring);
  if (parts.size() > 1) {
    std::vector<ScoreVector> members;
    for (const auto &part : parts) {
      members.push_back(compute_scores(part, cfg, data, epochs, derive_seed(seed, {part})));
    }
    return scoring::ensemble_scores(members);
  }

  std::string cache_path;
  if (!cfg.cache_dir.empty()) {
    std::filesystem::create_directories(cfg.cache_dir);
    cache_path = (std::filesystem::path(cfg.cache_dir) /
                  (scoring + "-" + hex(data.train.digest()) + "-" + hex(seed) + "-" +
                   std::to_string(epochs) + ".tsv"))
                     .string();
    if (std::filesystem::exists(cache_path)) {
      return scoring::read_scores(cache_path);
    }
  }

  const Dataset &d = data.train;
  ScoreVector result;
  if (scoring == "rand") {
    result = uniform_scores(d.size());
  } else if (scoring == "oracle") {
    if (data.clean_mask.size() != d.size()) {
      raise(ErrorCode::kInvalidConfig, "oracle scores need synthetic data with a clean mask");
    }
    result = oracle_scores(data.clean_mask);
  } else if (kModelScorings.count(scoring) > 0) {
    const bool transfer = scoring.find("tl") != std::string::npos;
    scoring::ScoringRunConfig run;
    run.scorer_spec = transfer ? scorer_spec(cfg, d) : trainee_spec(cfg, d);
    run.train_cfg = cfg.train;
    run.train_cfg.epochs = epochs;
    run.cross_validated = scoring.find("cv") != std::string::npos;
    run.ensemble_runs = scoring.front() == 'e' ? cfg.ensemble_runs : 1;
    if (transfer && !scoring::scorer_is_larger(run.scorer_spec, trainee_spec(cfg, d))) {
      warn("SpecNotLarger: transfer scorer is not larger than the trainee");
    }
    result = scoring::model_scores(d, run, seed);
  } else {
    const auto sentences = text::sentences_of(d);
    if (scoring == "sl_long" || scoring == "sl_short") {
      result = text::sentence_length_scores(
          sentences, scoring == "sl_long" ? text::LengthDirection::kLongEasy
                                          : text::LengthDirection::kShortEasy);
    } else {
      const int order = scoring[0] == 'u' ? 1 : scoring[0] == 'b' ? 2 : 3;
      const auto direction = scoring.ends_with("_high") ? text::EntropyDirection::kHighEntropyEasy
                                                        : text::EntropyDirection::kLowEntropyEasy;
      result = text::ngram_scores(sentences, order, direction);
    }
  }
  if (!cache_path.empty()) {
    scoring::write_scores(result, cache_path);
  }
  return result;
}

// Statistics

double paired_permutation_p_value(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    raise(ErrorCode::kLengthMismatch, "paired samples differ in length");
  }
  const std::size_t n = a.size();
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) {
    diff[i] = a[i] - b[i];
  }
  const double observed = std::abs(std::accumulate(diff.begin(), diff.end(), 0.0));
  double scale = 0.0;
  for (double x : diff) {
    scale += std::abs(x);
  }
  if (n == 0 || scale == 0.0) {
    return 1.0;
  }
  const double threshold = observed - 1e-12 * scale;
  auto flipped_sum = [&diff](std::uint64_t signs) {
    double s = 0.0;
    for (std::size_t i = 0; i < diff.size(); ++i) {
      s += ((signs >> i) & 1U) != 0 ? -diff[i] : diff[i];
    }
    return std::abs(s);
  };
  if (n <= 16) {
    const std::uint64_t patterns = std::uint64_t{1} << n;
    std::uint64_t extreme = 0;
    for (std::uint64_t signs = 0; signs < patterns; ++signs) {
      extreme += flipped_sum(signs) >= threshold ? 1 : 0;
    }
    return static_cast<double>(extreme) / static_cast<double>(patterns);
  }
  constexpr std::size_t kDraws = 20000;
  Rng rng(0, "permutation");
  std::size_t extreme = 0;
  for (std::size_t draw = 0; draw < kDraws; ++draw) {
    std::uint64_t signs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      signs |= static_cast<std::uint64_t>(rng() & 1U) << (i % 64);
    }
    extreme += flipped_sum(signs) >= threshold ? 1 : 0;
  }
  return static_cast<double>(extreme + 1) / static_cast<double>(kDraws + 1);
}

std::vector<MethodSummary> summarize(const std::vector<std::string> &methods,
                                     const std::vector<RunRecord> &runs) {
  std::map<std::string, std::map<std::size_t, double>> by_method;
  for (const auto &r : runs) {
    if (r.ok()) {
      by_method[r.method][r.trial] = r.max_accuracy;
    }
  }
  const auto &baseline = by_method["vanilla"];
  std::vector<MethodSummary> out;
  for (const auto &id : methods) {
    MethodSummary s;
    s.method = id;
    const auto &trials = by_method[id];
    for (const auto &[trial, acc] : trials) {
      s.trial_accuracies.push_back(acc);
    }
    const auto n = static_cast<double>(s.trial_accuracies.size());
    if (!s.trial_accuracies.empty()) {
      s.mean = std::accumulate(s.trial_accuracies.begin(), s.trial_accuracies.end(), 0.0) / n;
    }
    if (s.trial_accuracies.size() > 1) {
      double ss = 0.0;
      for (double v : s.trial_accuracies) {
        ss += (v - s.mean) * (v - s.mean);
      }
      s.std_dev = std::sqrt(ss / (n - 1.0));
    }
    std::vector<double> mine;
    std::vector<double> theirs;
    double baseline_mean = 0.0;
    for (const auto &[trial, acc] : baseline) {
      baseline_mean += acc;
      auto it = trials.find(trial);
      if (it != trials.end()) {
        mine.push_back(it->second);
        theirs.push_back(acc);
      }
    }
    if (!baseline.empty()) {
      baseline_mean /= static_cast<double>(baseline.size());
    }
    s.delta_vs_vanilla = id == "vanilla" ? 0.0 : s.mean - baseline_mean;
    s.p_value = id == "vanilla" ? 1.0 : paired_permutation_p_value(mine, theirs);
    out.push_back(std::move(s));
  }
  return out;
}

const MethodSummary &Report::summary(const std::string &method) const {
  for (const auto &s : summaries) {
    if (s.method == method) {
      return s;
    }
  }
  raise(ErrorCode::kInvalidConfig, "no summary for method \"" + method + "\"");
}

const RunRecord &Report::run(const std::string &method, std::size_t trial) const {
  for (const auto &r : runs) {
    if (r.method == method && r.trial == trial) {
      return r;
    }
  }
  raise(ErrorCode::kInvalidConfig, "no run for method \"" + method + "\" trial " + std::to_string(trial));
}

// Seeds

std::uint64_t SeedPlan::selection(const std::string &method, std::size_t trial_index) const {
  return derive_seed(master, {"selection", method, std::to_string(trial_index)});
}

std::uint64_t SeedPlan::scoring(const std::string &scoring_id) const {
  return derive_seed(master, {"scoring", scoring_id});
}

SeedPlan plan_seeds(const ExperimentConfig &cfg) {
  SeedPlan plan;
  plan.master = cfg.master_seed;
  plan.data = derive_seed(cfg.master_seed, {"data"});
  plan.calibration = derive_seed(cfg.master_seed, {"calibration"});
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    plan.trial.push_back(derive_seed(cfg.master_seed, "trial", t));
  }
  return plan;
}

void check_seed_uniqueness(const ExperimentConfig &cfg, const SeedPlan &plan) {
  std::map<std::uint64_t, std::string> owners;
  auto claim = [&owners](std::uint64_t seed, const std::string &role) {
    auto [it, inserted] = owners.emplace(seed, role);
    if (!inserted && it->second != role) {
      raise(ErrorCode::kInvalidConfig, "seed collision between " + it->second + " and " + role);
    }
  };
  claim(plan.data, "data");
  claim(plan.calibration, "calibration");
  for (std::size_t t = 0; t < plan.trial.size(); ++t) {
    claim(plan.trial[t], "trial/" + std::to_string(t));
  }
  for (const auto &id : with_vanilla(cfg.methods)) {
    const Method m = parse_method(id);
    if (!m.scoring.empty()) {
      claim(plan.scoring(m.scoring), "scoring/" + m.scoring);
    }
    for (std::size_t t = 0; t < plan.trial.size(); ++t) {
      claim(plan.selection(id, t), "selection/" + id + "/" + std::to_string(t));
    }
  }
}

// Execution

Report run_experiment(const ExperimentConfig &cfg) {
  const auto methods = with_vanilla(cfg.methods);
  const Context ctx = build_context(cfg, methods);

  std::vector<std::pair<std::string, std::size_t>> jobs;
  for (const auto &id : methods) {
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      jobs.emplace_back(id, t);
    }
  }
  std::vector<RunRecord> runs(jobs.size());
  std::size_t workers = cfg.threads == 0 ? std::thread::hardware_concurrency() : cfg.threads;
  workers = std::clamp<std::size_t>(workers, 1, jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      runs[j] = execute(ctx, jobs[j].first, jobs[j].second);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(work);
    }
  }

  Report report;
  report.epoch_budget = ctx.budget;
  report.trials = cfg.trials;
  report.methods = methods;
  report.runs = std::move(runs);
  report.summaries = summarize(report.methods, report.runs);
  return report;
}

RunRecord run_single(const ExperimentConfig &cfg, const std::string &method, std::size_t trial) {
  if (trial >= cfg.trials) {
    raise(ErrorCode::kInvalidConfig, "trial index out of range");
  }
  const Context ctx = build_context(cfg, {method});
  return execute(ctx, method, trial);
}

}  // namespace curriculum::harness
