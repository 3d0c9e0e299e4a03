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
#ifndef CURRICULUM_CORE_HPP_
#define CURRICULUM_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "curriculum/error.hpp"
#include "curriculum/rng.hpp"

namespace curriculum {

using ClassIndex = std::size_t;
using TokenId = std::uint32_t;
using DenseFeatures = std::vector<double>;
using TokenSequence = std::vector<TokenId>;

enum class DataKind { kDense, kText };

struct Sample {
  std::variant<DenseFeatures, TokenSequence> input;
  ClassIndex label = 0;

  bool is_dense() const { return std::holds_alternative<DenseFeatures>(input); }
  const DenseFeatures &features() const { return std::get<DenseFeatures>(input); }
  const TokenSequence &tokens() const { return std::get<TokenSequence>(input); }
};

/// Token strings for text datasets; id 0 is reserved for unknown tokens.
class Vocabulary {
 public:
  static constexpr TokenId kUnknown = 0;
  static constexpr const char *kUnknownToken = "<unk>";

  Vocabulary();

  TokenId add(const std::string &token);
  TokenId lookup(const std::string &token) const;
  const std::string &token(TokenId id) const { return tokens_.at(id); }
  std::size_t size() const { return tokens_.size(); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
};

/// Ordered, immutable collection of labelled samples. A sample's identity is
/// its position; every ScoreVector is aligned to that order.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Sample> samples, std::size_t class_count, DataKind kind,
          std::shared_ptr<const Vocabulary> vocabulary = nullptr);

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  std::size_t class_count() const { return class_count_; }
  DataKind kind() const { return kind_; }
  const Sample &operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<Sample> &samples() const { return samples_; }
  const std::shared_ptr<const Vocabulary> &vocabulary() const { return vocabulary_; }

  /// Length of dense feature vectors (0 for text data or an empty set).
  std::size_t feature_dim() const;
  std::vector<ClassIndex> labels() const;
  std::vector<std::size_t> class_sizes() const;

  /// New dataset holding the given samples in the given order.
  Dataset subset(std::span<const std::size_t> indices) const;

  /// Content hash, stable across runs; used as a cache key.
  std::uint64_t digest() const;

 private:
  std::vector<Sample> samples_;
  std::size_t class_count_ = 0;
  DataKind kind_ = DataKind::kDense;
  std::shared_ptr<const Vocabulary> vocabulary_;
};

/// Returns d unchanged when it is non-empty, rectangular and every class in
/// [0, class_count) occurs; throws EmptyDataset, MissingClass or
/// RaggedFeatures otherwise.
const Dataset &validate_dataset(const Dataset &d);

/// Per-sample easiness weights: non-negative, summing to one. A higher weight
/// marks an easier sample.
class ScoreVector {
 public:
  static constexpr double kSumTolerance = 1e-9;

  ScoreVector() = default;
  /// Takes already-normalized weights and checks them.
  explicit ScoreVector(std::vector<double> weights);

  /// Divides non-negative raw values by their sum.
  static ScoreVector normalize(std::span<const double> raw);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double> &weights() const { return weights_; }
  auto begin() const { return weights_.begin(); }
  auto end() const { return weights_.end(); }

  bool operator==(const ScoreVector &) const = default;

 private:
  std::vector<double> weights_;
};

ScoreVector uniform_scores(std::size_t n);

/// Indices ordered by descending value, ties by ascending index.
std::vector<std::size_t> argsort_descending(std::span<const double> values);

struct Halves {
  Dataset first;
  Dataset second;
  // first[i] is sample first_indices[i] of the source dataset.
  std::vector<std::size_t> first_indices;
  std::vector<std::size_t> second_indices;
};

/// Stratified split into two halves whose per-class counts differ by at most
/// one. Odd leftovers go to the first half for the lower-indexed half of the
/// odd-sized classes.
Halves stratified_halves(const Dataset &d, Rng &rng);

/// Groups sample indices by label, ascending within each class.
std::vector<std::vector<std::size_t>> indices_by_class(std::span<const ClassIndex> labels,
                                                       std::size_t class_count);

}  // namespace curriculum

#endif  // CURRICULUM_CORE_HPP_
