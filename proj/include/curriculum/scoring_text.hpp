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
#ifndef CURRICULUM_SCORING_TEXT_HPP_
#define CURRICULUM_SCORING_TEXT_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "curriculum/core.hpp"

namespace curriculum::text {

/// Normalized tokens of one sentence; never empty when produced by tokenize().
struct Sentence {
  std::vector<std::string> tokens;

  std::size_t size() const { return tokens.size(); }
  bool operator==(const Sentence &) const = default;
};

/// Lowercases, splits on whitespace runs, strips leading and trailing
/// punctuation from each token and drops empty tokens. Throws
/// EmptyAfterTokenize if nothing is left.
Sentence tokenize(std::string_view raw);

/// Contiguous n-gram counts of a corpus, orders 1 to 3, with no boundary
/// padding. Keys join tokens with a single space.
class CorpusStats {
 public:
  static constexpr int kMaxOrder = 3;
  using Counts = std::unordered_map<std::string, std::uint64_t>;

  /// Count of the n-gram starting at `pos` of `s`, 0 if unseen.
  std::uint64_t count(const Sentence &s, std::size_t pos, int order) const;
  std::uint64_t count(const std::string &ngram, int order) const;
  /// uc, bc or tc: sum of all counts of that order.
  std::uint64_t total(int order) const { return totals_.at(index(order)); }
  const Counts &counts(int order) const { return counts_.at(index(order)); }

  void add(const Sentence &s);
  void add_count(const std::string &ngram, int order, std::uint64_t count);

  bool operator==(const CorpusStats &) const = default;

 private:
  static std::size_t index(int order);

  std::array<Counts, kMaxOrder> counts_;
  std::array<std::uint64_t, kMaxOrder> totals_{};
};

std::string join_ngram(const Sentence &s, std::size_t pos, int order);

/// Throws EmptyCorpus for an empty corpus.
CorpusStats build_corpus_stats(std::span<const Sentence> corpus);

/// Sum over the sentence's n-gram positions of -p ln p, where p is the
/// corpus relative frequency of that n-gram. Sentences shorter than the order
/// score 0. Throws UnknownNgram for n-grams missing from stats.
double ngram_entropy(const Sentence &s, const CorpusStats &stats, int order);

enum class EntropyDirection { kHighEntropyEasy, kLowEntropyEasy };
enum class LengthDirection { kLongEasy, kShortEasy };

/// Maps per-sentence entropies to easiness weights: direct normalization for
/// kHighEntropyEasy, reciprocals (entropy floored at 1e-12) for
/// kLowEntropyEasy. All-equal input gives uniform weights.
ScoreVector entropy_to_scores(std::span<const double> entropies, EntropyDirection direction);

/// n-gram entropy scores of every sentence under the corpus' own statistics.
ScoreVector ngram_scores(std::span<const Sentence> corpus, int order, EntropyDirection direction);

ScoreVector sentence_length_scores(std::span<const Sentence> corpus, LengthDirection direction);

/// Rebuilds token strings for a text dataset from its vocabulary.
std::vector<Sentence> sentences_of(const Dataset &d);

/// Writes unigrams.tsv, bigrams.tsv and trigrams.tsv (sorted
/// `ngram<TAB>count` rows) into `directory`.
void write_corpus_stats(const CorpusStats &stats, const std::string &directory);
CorpusStats read_corpus_stats(const std::string &directory);

}  // namespace curriculum::text

#endif  // CURRICULUM_SCORING_TEXT_HPP_
