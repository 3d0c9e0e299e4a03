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
#ifndef CURRICULUM_SYNTH_HPP_
#define CURRICULUM_SYNTH_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "curriculum/core.hpp"

namespace curriculum::harness {

/// Isotropic Gaussian classes around simplex vertices at unit pairwise
/// distance, with a fraction of labels flipped to another class.
struct BlobSpec {
  std::size_t classes = 4;
  std::size_t per_class = 150;
  std::size_t dim = 10;
  double sigma = 0.5;
  double noise_fraction = 0.0;
};

struct SyntheticData {
  Dataset data;
  /// True where the label was not flipped.
  std::vector<bool> clean_mask;
};

/// Throws BadSpec unless classes >= 2, per_class >= 2, dim >= classes,
/// sigma > 0 and 0 <= noise_fraction < 0.5. Exactly
/// round(noise_fraction * N) labels are flipped.
SyntheticData synth_dataset(const BlobSpec &spec, Rng &rng);

/// Sentences built from shared filler words and class topic words. A fraction
/// of sentences additionally carry tokens that occur nowhere else.
struct TextCorpusSpec {
  std::size_t classes = 2;
  std::size_t per_class = 250;
  std::size_t min_length = 3;
  std::size_t max_length = 12;
  std::size_t topic_words = 20;
  double rare_fraction = 0.1;
};

struct SyntheticText {
  Dataset data;
  std::vector<std::string> lines;  // raw text of each sample
  std::vector<bool> has_rare;
};

SyntheticText synth_text_corpus(const TextCorpusSpec &spec, Rng &rng);

/// Raw easiness weight given to flipped samples by oracle_scores; clean
/// samples get 1.
inline constexpr double kOracleNoisyWeight = 0.1;

/// Difficulty oracle from a clean mask.
ScoreVector oracle_scores(const std::vector<bool> &clean_mask);

}  // namespace curriculum::harness

#endif  // CURRICULUM_SYNTH_HPP_
