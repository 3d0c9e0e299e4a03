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
#include "curriculum/core.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>

namespace curriculum {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kMissingClass: return "MissingClass";
    case ErrorCode::kRaggedFeatures: return "RaggedFeatures";
    case ErrorCode::kClassTooSmall: return "ClassTooSmall";
    case ErrorCode::kZeroLength: return "ZeroLength";
    case ErrorCode::kInvalidScores: return "InvalidScores";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyList: return "EmptyList";
    case ErrorCode::kEmptyAfterTokenize: return "EmptyAfterTokenize";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kUnknownNgram: return "UnknownNgram";
    case ErrorCode::kTooSmall: return "TooSmall";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kRagged: return "Ragged";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kBadSpec: return "BadSpec";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string &what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void raise(ErrorCode code, const std::string &what) { throw Error(code, what); }

namespace {

std::mutex warning_mutex;
WarningHandler warning_handler = [](std::string_view message) {
  std::clog << "warning: " << message << '\n';
};

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard<std::mutex> lock(warning_mutex);
  std::swap(warning_handler, handler);
  return handler;
}

void warn(std::string_view message) {
  std::lock_guard<std::mutex> lock(warning_mutex);
  if (warning_handler) {
    warning_handler(message);
  }
}

// Vocabulary

Vocabulary::Vocabulary() { add(kUnknownToken); }

TokenId Vocabulary::add(const std::string &token) {
  auto [it, inserted] = ids_.try_emplace(token, static_cast<TokenId>(tokens_.size()));
  if (inserted) {
    tokens_.push_back(token);
  }
  return it->second;
}

TokenId Vocabulary::lookup(const std::string &token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnknown : it->second;
}

// Dataset

Dataset::Dataset(std::vector<Sample> samples, std::size_t class_count, DataKind kind,
                 std::shared_ptr<const Vocabulary> vocabulary)
    : samples_(std::move(samples)),
      class_count_(class_count),
      kind_(kind),
      vocabulary_(std::move(vocabulary)) {}

std::size_t Dataset::feature_dim() const {
  if (kind_ != DataKind::kDense || samples_.empty()) {
    return 0;
  }
  return samples_.front().features().size();
}

std::vector<ClassIndex> Dataset::labels() const {
  std::vector<ClassIndex> out;
  out.reserve(samples_.size());
  for (const auto &s : samples_) {
    out.push_back(s.label);
  }
  return out;
}

std::vector<std::size_t> Dataset::class_sizes() const {
  std::vector<std::size_t> sizes(class_count_, 0);
  for (const auto &s : samples_) {
    if (s.label < class_count_) {
      ++sizes[s.label];
    }
  }
  return sizes;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<Sample> picked;
  picked.reserve(indices.size());
  for (auto i : indices) {
    picked.push_back(samples_.at(i));
  }
  return Dataset(std::move(picked), class_count_, kind_, vocabulary_);
}

std::uint64_t Dataset::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void *data, std::size_t len) {
    const auto *bytes = static_cast<const unsigned char *>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t header[2] = {class_count_, static_cast<std::uint64_t>(kind_)};
  feed(header, sizeof(header));
  for (const auto &s : samples_) {
    const std::uint64_t label = s.label;
    feed(&label, sizeof(label));
    if (s.is_dense()) {
      feed(s.features().data(), s.features().size() * sizeof(double));
    } else {
      feed(s.tokens().data(), s.tokens().size() * sizeof(TokenId));
    }
  }
  return h;
}

const Dataset &validate_dataset(const Dataset &d) {
  if (d.empty()) {
    raise(ErrorCode::kEmptyDataset, "dataset has no samples");
  }
  if (d.class_count() == 0) {
    raise(ErrorCode::kMissingClass, "class_count must be positive");
  }
  const bool dense = d.kind() == DataKind::kDense;
  const std::size_t dim = d.feature_dim();
  std::vector<bool> seen(d.class_count(), false);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Sample &s = d[i];
    if (s.is_dense() != dense) {
      raise(ErrorCode::kRaggedFeatures, "sample " + std::to_string(i) + " has the wrong input kind");
    }
    if (dense ? s.features().size() != dim || dim == 0 : s.tokens().empty()) {
      raise(ErrorCode::kRaggedFeatures, "sample " + std::to_string(i) + " has inconsistent length");
    }
    if (s.label >= d.class_count()) {
      raise(ErrorCode::kUnknownLabel, "sample " + std::to_string(i) + " has label " +
                                          std::to_string(s.label) + " out of range");
    }
    seen[s.label] = true;
  }
  for (std::size_t c = 0; c < seen.size(); ++c) {
    if (!seen[c]) {
      raise(ErrorCode::kMissingClass, "class " + std::to_string(c) + " has no samples");
    }
  }
  return d;
}

// ScoreVector

ScoreVector::ScoreVector(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) {
    raise(ErrorCode::kZeroLength, "score vector is empty");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      raise(ErrorCode::kInvalidScores, "score entries must be finite and non-negative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "score entries sum to " << sum;
    raise(ErrorCode::kInvalidScores, msg.str());
  }
}

ScoreVector ScoreVector::normalize(std::span<const double> raw) {
  if (raw.empty()) {
    raise(ErrorCode::kZeroLength, "cannot normalize an empty vector");
  }
  double sum = 0.0;
  for (double v : raw) {
    if (!std::isfinite(v) || v < 0.0) {
      raise(ErrorCode::kInvalidScores, "raw scores must be finite and non-negative");
    }
    sum += v;
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    raise(ErrorCode::kInvalidScores, "raw scores must have a positive finite sum");
  }
  std::vector<double> weights(raw.size());
  std::transform(raw.begin(), raw.end(), weights.begin(), [sum](double v) { return v / sum; });
  return ScoreVector(std::move(weights));
}

ScoreVector uniform_scores(std::size_t n) {
  if (n == 0) {
    raise(ErrorCode::kZeroLength, "uniform_scores needs n >= 1");
  }
  return ScoreVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::vector<std::size_t> argsort_descending(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&values](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

std::vector<std::vector<std::size_t>> indices_by_class(std::span<const ClassIndex> labels,
                                                       std::size_t class_count) {
  std::vector<std::vector<std::size_t>> groups(class_count);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= class_count) {
      raise(ErrorCode::kUnknownLabel, "label " + std::to_string(labels[i]) + " out of range");
    }
    groups[labels[i]].push_back(i);
  }
  return groups;
}

Halves stratified_halves(const Dataset &d, Rng &rng) {
  const auto labels = d.labels();
  auto groups = indices_by_class(labels, d.class_count());
  for (std::size_t c = 0; c < groups.size(); ++c) {
    if (groups[c].size() < 2) {
      raise(ErrorCode::kClassTooSmall,
            "class " + std::to_string(c) + " needs at least 2 samples to be halved");
    }
  }

  std::size_t odd_classes = 0;
  for (const auto &g : groups) {
    odd_classes += g.size() % 2;
  }
  const std::size_t extras_for_first = (odd_classes + 1) / 2;

  std::vector<bool> in_first(d.size(), false);
  std::size_t odd_seen = 0;
  for (auto &members : groups) {
    std::size_t take = members.size() / 2;
    if (members.size() % 2 == 1) {
      if (odd_seen < extras_for_first) {
        ++take;
      }
      ++odd_seen;
    }
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t j = 0; j < take; ++j) {
      in_first[members[j]] = true;
    }
  }

  Halves halves;
  for (std::size_t i = 0; i < d.size(); ++i) {
    (in_first[i] ? halves.first_indices : halves.second_indices).push_back(i);
  }
  halves.first = d.subset(halves.first_indices);
  halves.second = d.subset(halves.second_indices);
  return halves;
}

}  // namespace curriculum
