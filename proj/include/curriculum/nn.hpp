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
#ifndef CURRICULUM_NN_HPP_
#define CURRICULUM_NN_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "curriculum/core.hpp"

namespace curriculum::nn {

/// Dense rectifier network with a softmax output.
///
/// layer_sizes runs from the input width to the class count. When vocab_size
/// is non-zero the network reads token sequences: each sample is embedded as
/// the mean of learned token vectors, and layer_sizes[0] is the embedding
/// width.
struct ModelSpec {
  std::vector<std::size_t> layer_sizes;
  std::size_t vocab_size = 0;

  bool is_text() const { return vocab_size > 0; }
  std::size_t input_dim() const { return layer_sizes.front(); }
  std::size_t class_count() const { return layer_sizes.back(); }
  std::size_t parameter_count() const;

  bool operator==(const ModelSpec &) const = default;
};

/// Throws InvalidSpec unless the spec has at least two positive layer sizes.
void validate_spec(const ModelSpec &spec);

/// Checks that spec fits dataset d (input width, kind and class count).
void check_compatible(const ModelSpec &spec, const Dataset &d);

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;
};

/// Parameters of one network. The same layout holds gradients and optimizer
/// moments.
struct ModelParams {
  ModelSpec spec;
  Eigen::MatrixXd embedding;  // vocab x width, empty for dense input
  std::vector<DenseLayer> layers;

  /// Parameters filled with zeros.
  static ModelParams zeros(const ModelSpec &spec);

  /// Flat views over every tensor in a fixed order (embedding first, then each
  /// layer's weights and bias).
  std::vector<std::span<double>> tensors();
  std::vector<std::span<const double>> tensors() const;

  bool all_finite() const;
  bool operator==(const ModelParams &other) const;
};

enum class OptimizerKind { kAdam, kSgd };

struct AdamSettings {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TrainConfig {
  std::size_t epochs = 1;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  AdamSettings adam;
  std::uint64_t seed = 0;

  /// Throws InvalidConfig on epochs == 0, batch_size == 0 or a non-positive
  /// learning rate.
  void validate() const;
};

/// He-style uniform initialization, zero biases, drawn from rng.
ModelParams init_model(const ModelSpec &spec, Rng &rng);

/// Logits for the selected samples (all samples when indices is empty).
Eigen::MatrixXd forward_logits(const ModelParams &params, const Dataset &d,
                               std::span<const std::size_t> indices = {});

/// Softmax cross-entropy per sample, probabilities clamped below at 1e-12.
std::vector<double> per_sample_loss(const ModelParams &params, const Dataset &d);

/// Top-1 accuracy; argmax ties resolve to the lowest class index.
double evaluate(const ModelParams &params, const Dataset &d);

/// Mean cross-entropy over the selected samples, and its gradient when
/// gradient is non-null (resized to match params).
double loss_and_gradient(const ModelParams &params, const Dataset &d,
                         std::span<const std::size_t> indices, ModelParams *gradient);

/// Mini-batch optimizer with state that persists across epochs.
///
/// Batches are formed by a seeded shuffle of each epoch's subset, drawn from
/// the "shuffle" stream of cfg.seed.
class Trainer {
 public:
  Trainer(ModelParams params, const TrainConfig &cfg);

  /// One pass over `indices` of d. Returns the mean per-batch training loss.
  double run_epoch(const Dataset &d, std::span<const std::size_t> indices);
  double run_epoch(const Dataset &d);

  const ModelParams &params() const { return params_; }
  ModelParams release() && { return std::move(params_); }
  std::size_t steps() const { return step_; }

 private:
  void apply(const ModelParams &gradient);

  ModelParams params_;
  TrainConfig cfg_;
  Rng shuffle_rng_;
  ModelParams first_moment_;
  ModelParams second_moment_;
  std::size_t step_ = 0;
};

/// Runs cfg.epochs epochs from `params`. When subsets is given it must hold one
/// index list per epoch; otherwise every epoch uses all of d.
ModelParams train(ModelParams params, const Dataset &d, const TrainConfig &cfg,
                  const std::vector<std::vector<std::size_t>> *subsets = nullptr);

/// Maximum relative error between analytic and central-difference gradients
/// of the mean loss over d_small, across every parameter.
double gradient_check(const ModelParams &params, const Dataset &d_small, double step = 1e-5);
double gradient_check(const ModelSpec &spec, const Dataset &d_small, Rng &rng);

/// Text format: a header with the spec, then every tensor in tensors() order.
void save_params(const ModelParams &params, const std::string &path);
ModelParams load_params(const std::string &path);

}  // namespace curriculum::nn

#endif  // CURRICULUM_NN_HPP_
