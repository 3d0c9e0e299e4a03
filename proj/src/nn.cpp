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
#include "curriculum/nn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace curriculum::nn {
namespace {

constexpr double kProbabilityFloor = 1e-12;
constexpr std::size_t kEvalChunk = 512;

struct ForwardCache {
  Eigen::MatrixXd input;                     // batch x input_dim
  std::vector<Eigen::MatrixXd> activations;  // post-activation of each hidden layer
  std::vector<Eigen::MatrixXd> preactivations;
  Eigen::MatrixXd logits;
};

Eigen::MatrixXd embed(const ModelParams &params, const Dataset &d,
                      std::span<const std::size_t> indices) {
  const auto width = static_cast<Eigen::Index>(params.spec.input_dim());
  Eigen::MatrixXd x(static_cast<Eigen::Index>(indices.size()), width);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const Sample &s = d[indices[r]];
    const auto row = static_cast<Eigen::Index>(r);
    if (params.spec.is_text()) {
      const auto &tokens = s.tokens();
      x.row(row).setZero();
      for (TokenId t : tokens) {
        const auto id = t < params.spec.vocab_size ? t : Vocabulary::kUnknown;
        x.row(row) += params.embedding.row(static_cast<Eigen::Index>(id));
      }
      x.row(row) /= static_cast<double>(tokens.size());
    } else {
      const auto &f = s.features();
      x.row(row) = Eigen::Map<const Eigen::RowVectorXd>(f.data(), width);
    }
  }
  return x;
}

ForwardCache forward(const ModelParams &params, const Dataset &d,
                     std::span<const std::size_t> indices) {
  ForwardCache cache;
  cache.input = embed(params, d, indices);
  const Eigen::MatrixXd *a = &cache.input;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto &layer = params.layers[l];
    Eigen::MatrixXd z = (*a) * layer.weights.transpose();
    z.rowwise() += layer.bias.transpose();
    if (l + 1 == params.layers.size()) {
      cache.logits = std::move(z);
    } else {
      cache.preactivations.push_back(z);
      cache.activations.push_back(z.cwiseMax(0.0));
      a = &cache.activations.back();
    }
  }
  return cache;
}

// Row-wise softmax with max subtraction.
Eigen::MatrixXd softmax(const Eigen::MatrixXd &logits) {
  Eigen::MatrixXd p = logits;
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    const double m = p.row(r).maxCoeff();
    p.row(r) = (p.row(r).array() - m).exp();
    p.row(r) /= p.row(r).sum();
  }
  return p;
}

double clamped_nll(double probability) { return -std::log(std::max(probability, kProbabilityFloor)); }

std::vector<std::size_t> all_indices(const Dataset &d) {
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

}  // namespace

std::size_t ModelSpec::parameter_count() const {
  std::size_t count = vocab_size * (layer_sizes.empty() ? 0 : layer_sizes.front());
  for (std::size_t l = 1; l < layer_sizes.size(); ++l) {
    count += layer_sizes[l] * layer_sizes[l - 1] + layer_sizes[l];
  }
  return count;
}

void validate_spec(const ModelSpec &spec) {
  if (spec.layer_sizes.size() < 2) {
    raise(ErrorCode::kInvalidSpec, "a model needs at least an input and an output layer");
  }
  for (auto n : spec.layer_sizes) {
    if (n == 0) {
      raise(ErrorCode::kInvalidSpec, "layer sizes must be positive");
    }
  }
}

void check_compatible(const ModelSpec &spec, const Dataset &d) {
  validate_spec(spec);
  if (spec.class_count() != d.class_count()) {
    raise(ErrorCode::kShapeMismatch, "model has " + std::to_string(spec.class_count()) +
                                         " outputs but dataset has " +
                                         std::to_string(d.class_count()) + " classes");
  }
  if (spec.is_text() != (d.kind() == DataKind::kText)) {
    raise(ErrorCode::kShapeMismatch, "model input kind does not match dataset kind");
  }
  if (!spec.is_text() && !d.empty() && d.feature_dim() != spec.input_dim()) {
    raise(ErrorCode::kShapeMismatch, "model expects " + std::to_string(spec.input_dim()) +
                                         " features but dataset has " +
                                         std::to_string(d.feature_dim()));
  }
}

ModelParams ModelParams::zeros(const ModelSpec &spec) {
  validate_spec(spec);
  ModelParams p;
  p.spec = spec;
  if (spec.is_text()) {
    p.embedding = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(spec.vocab_size),
                                        static_cast<Eigen::Index>(spec.input_dim()));
  }
  for (std::size_t l = 1; l < spec.layer_sizes.size(); ++l) {
    const auto out = static_cast<Eigen::Index>(spec.layer_sizes[l]);
    const auto in = static_cast<Eigen::Index>(spec.layer_sizes[l - 1]);
    p.layers.push_back({Eigen::MatrixXd::Zero(out, in), Eigen::VectorXd::Zero(out)});
  }
  return p;
}

std::vector<std::span<double>> ModelParams::tensors() {
  std::vector<std::span<double>> out;
  if (embedding.size() > 0) {
    out.emplace_back(embedding.data(), static_cast<std::size_t>(embedding.size()));
  }
  for (auto &layer : layers) {
    out.emplace_back(layer.weights.data(), static_cast<std::size_t>(layer.weights.size()));
    out.emplace_back(layer.bias.data(), static_cast<std::size_t>(layer.bias.size()));
  }
  return out;
}

std::vector<std::span<const double>> ModelParams::tensors() const {
  std::vector<std::span<const double>> out;
  for (auto t : const_cast<ModelParams *>(this)->tensors()) {
    out.emplace_back(t.data(), t.size());
  }
  return out;
}

bool ModelParams::all_finite() const {
  for (auto t : tensors()) {
    for (double v : t) {
      if (!std::isfinite(v)) {
        return false;
      }
    }
  }
  return true;
}

bool ModelParams::operator==(const ModelParams &other) const {
  if (!(spec == other.spec)) {
    return false;
  }
  auto a = tensors();
  auto b = other.tensors();
  if (a.size() != b.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::equal(a[i].begin(), a[i].end(), b[i].begin(), b[i].end())) {
      return false;
    }
  }
  return true;
}

void TrainConfig::validate() const {
  if (epochs == 0) {
    raise(ErrorCode::kInvalidConfig, "epochs must be at least 1");
  }
  if (batch_size == 0) {
    raise(ErrorCode::kInvalidConfig, "batch_size must be at least 1");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    raise(ErrorCode::kInvalidConfig, "learning_rate must be positive");
  }
}

ModelParams init_model(const ModelSpec &spec, Rng &rng) {
  ModelParams p = ModelParams::zeros(spec);
  if (spec.is_text()) {
    const double bound = std::sqrt(3.0 / static_cast<double>(spec.input_dim()));
    for (Eigen::Index i = 0; i < p.embedding.size(); ++i) {
      p.embedding.data()[i] = rng.uniform(-bound, bound);
    }
  }
  for (auto &layer : p.layers) {
    const double bound = std::sqrt(6.0 / static_cast<double>(layer.weights.cols()));
    for (Eigen::Index i = 0; i < layer.weights.size(); ++i) {
      layer.weights.data()[i] = rng.uniform(-bound, bound);
    }
  }
  return p;
}

Eigen::MatrixXd forward_logits(const ModelParams &params, const Dataset &d,
                               std::span<const std::size_t> indices) {
  check_compatible(params.spec, d);
  if (indices.empty()) {
    const auto idx = all_indices(d);
    return forward(params, d, idx).logits;
  }
  return forward(params, d, indices).logits;
}

std::vector<double> per_sample_loss(const ModelParams &params, const Dataset &d) {
  check_compatible(params.spec, d);
  std::vector<double> losses;
  losses.reserve(d.size());
  const auto idx = all_indices(d);
  for (std::size_t start = 0; start < idx.size(); start += kEvalChunk) {
    const std::size_t len = std::min(kEvalChunk, idx.size() - start);
    const std::span<const std::size_t> chunk(idx.data() + start, len);
    const Eigen::MatrixXd p = softmax(forward(params, d, chunk).logits);
    for (std::size_t r = 0; r < len; ++r) {
      const auto label = static_cast<Eigen::Index>(d[chunk[r]].label);
      losses.push_back(clamped_nll(p(static_cast<Eigen::Index>(r), label)));
    }
  }
  return losses;
}

double evaluate(const ModelParams &params, const Dataset &d) {
  check_compatible(params.spec, d);
  if (d.empty()) {
    raise(ErrorCode::kEmptyDataset, "cannot evaluate on an empty dataset");
  }
  std::size_t correct = 0;
  const auto idx = all_indices(d);
  for (std::size_t start = 0; start < idx.size(); start += kEvalChunk) {
    const std::size_t len = std::min(kEvalChunk, idx.size() - start);
    const std::span<const std::size_t> chunk(idx.data() + start, len);
    const Eigen::MatrixXd logits = forward(params, d, chunk).logits;
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
      Eigen::Index best = 0;
      for (Eigen::Index c = 1; c < logits.cols(); ++c) {
        if (logits(r, c) > logits(r, best)) {
          best = c;
        }
      }
      if (static_cast<std::size_t>(best) == d[chunk[static_cast<std::size_t>(r)]].label) {
        ++correct;
      }
    }
  }
  return static_cast<double>(correct) / static_cast<double>(d.size());
}

double loss_and_gradient(const ModelParams &params, const Dataset &d,
                         std::span<const std::size_t> indices, ModelParams *gradient) {
  if (indices.empty()) {
    raise(ErrorCode::kEmptyInput, "loss over an empty batch");
  }
  const ForwardCache cache = forward(params, d, indices);
  const Eigen::MatrixXd p = softmax(cache.logits);
  const auto batch = static_cast<double>(indices.size());

  double loss = 0.0;
  for (std::size_t r = 0; r < indices.size(); ++r) {
    loss += clamped_nll(p(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(d[indices[r]].label)));
  }
  loss /= batch;
  if (gradient == nullptr) {
    return loss;
  }

  *gradient = ModelParams::zeros(params.spec);
  Eigen::MatrixXd delta = p;
  for (std::size_t r = 0; r < indices.size(); ++r) {
    delta(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(d[indices[r]].label)) -= 1.0;
  }
  delta /= batch;

  for (std::size_t l = params.layers.size(); l-- > 0;) {
    const Eigen::MatrixXd &below = l == 0 ? cache.input : cache.activations[l - 1];
    gradient->layers[l].weights = delta.transpose() * below;
    gradient->layers[l].bias = delta.colwise().sum().transpose();
    Eigen::MatrixXd back = delta * params.layers[l].weights;
    if (l > 0) {
      back = back.cwiseProduct(
          (cache.preactivations[l - 1].array() > 0.0).cast<double>().matrix());
    } else if (params.spec.is_text()) {
      for (std::size_t r = 0; r < indices.size(); ++r) {
        const auto &tokens = d[indices[r]].tokens();
        const double share = 1.0 / static_cast<double>(tokens.size());
        for (TokenId t : tokens) {
          const auto id = t < params.spec.vocab_size ? t : Vocabulary::kUnknown;
          gradient->embedding.row(static_cast<Eigen::Index>(id)) +=
              share * back.row(static_cast<Eigen::Index>(r));
        }
      }
    }
    delta = std::move(back);
  }
  return loss;
}

// Trainer

Trainer::Trainer(ModelParams params, const TrainConfig &cfg)
    : params_(std::move(params)),
      cfg_(cfg),
      shuffle_rng_(cfg.seed, streams::kShuffle),
      first_moment_(ModelParams::zeros(params_.spec)),
      second_moment_(ModelParams::zeros(params_.spec)) {
  cfg_.validate();
}

double Trainer::run_epoch(const Dataset &d) { return run_epoch(d, all_indices(d)); }

double Trainer::run_epoch(const Dataset &d, std::span<const std::size_t> indices) {
  check_compatible(params_.spec, d);
  if (indices.empty()) {
    raise(ErrorCode::kEmptyInput, "epoch subset is empty");
  }
  std::vector<std::size_t> order(indices.begin(), indices.end());
  for (auto i : order) {
    if (i >= d.size()) {
      raise(ErrorCode::kShapeMismatch, "subset index " + std::to_string(i) + " out of range");
    }
  }
  shuffle_rng_.shuffle(std::span<std::size_t>(order));

  double total = 0.0;
  std::size_t batches = 0;
  ModelParams gradient;
  for (std::size_t start = 0; start < order.size(); start += cfg_.batch_size) {
    const std::size_t len = std::min(cfg_.batch_size, order.size() - start);
    const double loss = loss_and_gradient(
        params_, d, std::span<const std::size_t>(order.data() + start, len), &gradient);
    if (!std::isfinite(loss)) {
      raise(ErrorCode::kNonFiniteLoss, "training loss diverged");
    }
    apply(gradient);
    total += loss;
    ++batches;
  }
  if (!params_.all_finite()) {
    raise(ErrorCode::kNonFiniteLoss, "parameters became non-finite");
  }
  return total / static_cast<double>(batches);
}

void Trainer::apply(const ModelParams &gradient) {
  ++step_;
  auto params = params_.tensors();
  auto grads = gradient.tensors();
  if (cfg_.optimizer == OptimizerKind::kSgd) {
    for (std::size_t t = 0; t < params.size(); ++t) {
      for (std::size_t i = 0; i < params[t].size(); ++i) {
        params[t][i] -= cfg_.learning_rate * grads[t][i];
      }
    }
    return;
  }
  const auto &a = cfg_.adam;
  const double correction1 = 1.0 - std::pow(a.beta1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(a.beta2, static_cast<double>(step_));
  auto m = first_moment_.tensors();
  auto v = second_moment_.tensors();
  for (std::size_t t = 0; t < params.size(); ++t) {
    for (std::size_t i = 0; i < params[t].size(); ++i) {
      const double g = grads[t][i];
      m[t][i] = a.beta1 * m[t][i] + (1.0 - a.beta1) * g;
      v[t][i] = a.beta2 * v[t][i] + (1.0 - a.beta2) * g * g;
      const double m_hat = m[t][i] / correction1;
      const double v_hat = v[t][i] / correction2;
      params[t][i] -= cfg_.learning_rate * m_hat / (std::sqrt(v_hat) + a.epsilon);
    }
  }
}

ModelParams train(ModelParams params, const Dataset &d, const TrainConfig &cfg,
                  const std::vector<std::vector<std::size_t>> *subsets) {
  cfg.validate();
  if (subsets != nullptr && subsets->size() != cfg.epochs) {
    raise(ErrorCode::kLengthMismatch, "need one subset per epoch");
  }
  Trainer trainer(std::move(params), cfg);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (subsets != nullptr) {
      trainer.run_epoch(d, (*subsets)[epoch]);
    } else {
      trainer.run_epoch(d);
    }
  }
  return std::move(trainer).release();
}

double gradient_check(const ModelParams &params, const Dataset &d_small, double step) {
  check_compatible(params.spec, d_small);
  const auto idx = all_indices(d_small);
  ModelParams analytic;
  loss_and_gradient(params, d_small, idx, &analytic);

  ModelParams probe = params;
  auto probe_tensors = probe.tensors();
  auto grad_tensors = analytic.tensors();
  double worst = 0.0;
  for (std::size_t t = 0; t < probe_tensors.size(); ++t) {
    for (std::size_t i = 0; i < probe_tensors[t].size(); ++i) {
      double &value = probe_tensors[t][i];
      const double saved = value;
      value = saved + step;
      const double up = loss_and_gradient(probe, d_small, idx, nullptr);
      value = saved - step;
      const double down = loss_and_gradient(probe, d_small, idx, nullptr);
      value = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double exact = grad_tensors[t][i];
      const double scale = std::max({std::abs(numeric), std::abs(exact), 1e-4});
      worst = std::max(worst, std::abs(numeric - exact) / scale);
    }
  }
  return worst;
}

double gradient_check(const ModelSpec &spec, const Dataset &d_small, Rng &rng) {
  return gradient_check(init_model(spec, rng), d_small);
}

void save_params(const ModelParams &params, const std::string &path) {
  std::ofstream out(path);
  if (!out) {
    raise(ErrorCode::kIoError, "cannot write " + path);
  }
  out << "curriculum-model 1\n";
  out << "vocab " << params.spec.vocab_size << '\n';
  out << "layers " << params.spec.layer_sizes.size();
  for (auto n : params.spec.layer_sizes) {
    out << ' ' << n;
  }
  out << '\n';
  out.precision(17);
  for (auto t : params.tensors()) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      out << (i == 0 ? "" : " ") << t[i];
    }
    out << '\n';
  }
  if (!out) {
    raise(ErrorCode::kIoError, "failed writing " + path);
  }
}

ModelParams load_params(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    raise(ErrorCode::kIoError, "cannot read " + path);
  }
  std::string word;
  int version = 0;
  ModelSpec spec;
  std::size_t count = 0;
  if (!(in >> word >> version) || word != "curriculum-model" || version != 1) {
    raise(ErrorCode::kParseError, path + " is not a model file");
  }
  if (!(in >> word >> spec.vocab_size) || word != "vocab" || !(in >> word >> count) ||
      word != "layers") {
    raise(ErrorCode::kParseError, path + " has a malformed header");
  }
  spec.layer_sizes.resize(count);
  for (auto &n : spec.layer_sizes) {
    if (!(in >> n)) {
      raise(ErrorCode::kParseError, path + " has a malformed layer list");
    }
  }
  ModelParams params = ModelParams::zeros(spec);
  for (auto t : params.tensors()) {
    for (double &v : t) {
      if (!(in >> v)) {
        raise(ErrorCode::kParseError, path + " is truncated");
      }
    }
  }
  return params;
}

}  // namespace curriculum::nn
