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
#include "curriculum/synth.hpp"

#include <cmath>
#include <memory>
#include <numeric>

#include "curriculum/scoring_text.hpp"

namespace curriculum::harness {
namespace {

const char *const kFillerWords[] = {"the", "a", "of", "and", "to", "in", "is", "it", "that", "on"};

}  // namespace

SyntheticData synth_dataset(const BlobSpec &spec, Rng &rng) {
  if (spec.classes < 2 || spec.per_class < 2 || spec.dim < spec.classes || !(spec.sigma > 0.0) ||
      !(spec.noise_fraction >= 0.0) || !(spec.noise_fraction < 0.5)) {
    raise(ErrorCode::kBadSpec, "gaussian_blobs needs classes >= 2, per_class >= 2, dim >= classes, "
                               "sigma > 0 and noise_fraction in [0, 0.5)");
  }
  const std::size_t n = spec.classes * spec.per_class;
  // Scaled basis vectors: |e_a - e_b| / sqrt(2) = 1.
  const double vertex = 1.0 / std::sqrt(2.0);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<std::size_t>(order));

  std::vector<Sample> samples(n);
  for (std::size_t slot = 0; slot < n; ++slot) {
    const ClassIndex label = order[slot] / spec.per_class;
    DenseFeatures f(spec.dim);
    for (std::size_t j = 0; j < spec.dim; ++j) {
      f[j] = (j == label ? vertex : 0.0) + spec.sigma * rng.normal();
    }
    samples[slot] = {std::move(f), label};
  }

  SyntheticData out;
  out.clean_mask.assign(n, true);
  const auto flips = static_cast<std::size_t>(std::llround(spec.noise_fraction * static_cast<double>(n)));
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t f = 0; f < flips; ++f) {
    std::swap(pool[f], pool[f + rng.index(n - f)]);
    const std::size_t i = pool[f];
    const ClassIndex offset = 1 + rng.index(spec.classes - 1);
    samples[i].label = (samples[i].label + offset) % spec.classes;
    out.clean_mask[i] = false;
  }
  out.data = Dataset(std::move(samples), spec.classes, DataKind::kDense);
  return out;
}

SyntheticText synth_text_corpus(const TextCorpusSpec &spec, Rng &rng) {
  if (spec.classes < 2 || spec.per_class < 2 || spec.min_length < 1 ||
      spec.max_length < spec.min_length || spec.topic_words < 1 || spec.rare_fraction < 0.0 ||
      spec.rare_fraction > 1.0) {
    raise(ErrorCode::kBadSpec, "invalid synthetic text corpus spec");
  }
  const std::size_t n = spec.classes * spec.per_class;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<std::size_t>(order));

  const auto rare_count = static_cast<std::size_t>(std::llround(spec.rare_fraction * static_cast<double>(n)));
  std::vector<bool> rare(n, false);
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t r = 0; r < rare_count; ++r) {
    std::swap(pool[r], pool[r + rng.index(n - r)]);
    rare[pool[r]] = true;
  }

  auto vocab = std::make_shared<Vocabulary>();
  SyntheticText out;
  std::vector<Sample> samples;
  samples.reserve(n);
  std::size_t next_rare = 0;
  for (std::size_t slot = 0; slot < n; ++slot) {
    const ClassIndex label = order[slot] / spec.per_class;
    const std::size_t length = spec.min_length + rng.index(spec.max_length - spec.min_length + 1);
    std::string line;
    for (std::size_t w = 0; w < length; ++w) {
      std::string word;
      if (rng.uniform() < 0.5) {
        word = kFillerWords[rng.index(std::size(kFillerWords))];
      } else {
        // Squaring the draw skews topic words towards the low ids.
        const double u = rng.uniform();
        const auto id = static_cast<std::size_t>(u * u * static_cast<double>(spec.topic_words));
        word = "c" + std::to_string(label) + "w" + std::to_string(id);
      }
      line += (w == 0 ? "" : " ") + word;
    }
    if (rare[slot]) {
      line += " rare" + std::to_string(next_rare++);
    }
    const text::Sentence sentence = text::tokenize(line);
    TokenSequence tokens;
    for (const auto &t : sentence.tokens) {
      tokens.push_back(vocab->add(t));
    }
    samples.push_back({std::move(tokens), label});
    out.lines.push_back(std::move(line));
    out.has_rare.push_back(rare[slot]);
  }
  out.data = Dataset(std::move(samples), spec.classes, DataKind::kText, std::move(vocab));
  return out;
}

ScoreVector oracle_scores(const std::vector<bool> &clean_mask) {
  std::vector<double> raw(clean_mask.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = clean_mask[i] ? 1.0 : kOracleNoisyWeight;
  }
  return ScoreVector::normalize(raw);
}

}  // namespace curriculum::harness
