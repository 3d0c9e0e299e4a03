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
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "curriculum/scoring_text.hpp"
#include "oracles/oracles.hpp"

namespace curriculum::text {
namespace {

std::vector<Sentence> corpus_of(std::initializer_list<const char *> lines) {
  std::vector<Sentence> out;
  for (const char *line : lines) {
    out.push_back(tokenize(line));
  }
  return out;
}

std::vector<Sentence> random_corpus(Rng &rng, std::size_t sentences, std::size_t vocab) {
  std::vector<Sentence> out(sentences);
  for (auto &s : out) {
    const std::size_t length = 1 + rng.index(8);
    for (std::size_t i = 0; i < length; ++i) {
      s.tokens.push_back("w" + std::to_string(rng.index(vocab)));
    }
  }
  return out;
}

ErrorCode code_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIoError;
}

std::vector<std::size_t> reversed(std::vector<std::size_t> v) {
  std::reverse(v.begin(), v.end());
  return v;
}

TEST(Tokenize, LowercasesAndStripsPunctuation) {
  EXPECT_EQ(tokenize("The cat sat.").tokens, (std::vector<std::string>{"the", "cat", "sat"}));
  EXPECT_EQ(tokenize("A  B").tokens, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(tokenize("\t(x)\n y-z ").tokens, (std::vector<std::string>{"x", "y-z"}));
}

TEST(Tokenize, RejectsPunctuationOnly) {
  EXPECT_EQ(code_of([] { tokenize("..."); }), ErrorCode::kEmptyAfterTokenize);
  EXPECT_EQ(code_of([] { tokenize("   "); }), ErrorCode::kEmptyAfterTokenize);
}

TEST(CorpusStats, HandCountedExample) {
  const auto stats = build_corpus_stats(corpus_of({"a b", "a c"}));
  EXPECT_EQ(stats.count("a", 1), 2u);
  EXPECT_EQ(stats.count("b", 1), 1u);
  EXPECT_EQ(stats.count("c", 1), 1u);
  EXPECT_EQ(stats.total(1), 4u);
  EXPECT_EQ(stats.count("a b", 2), 1u);
  EXPECT_EQ(stats.count("a c", 2), 1u);
  EXPECT_EQ(stats.total(2), 2u);
  EXPECT_EQ(stats.total(3), 0u);
}

TEST(CorpusStats, SingleToken) {
  const auto stats = build_corpus_stats(corpus_of({"a"}));
  EXPECT_EQ(stats.total(1), 1u);
  EXPECT_EQ(stats.total(2), 0u);
  EXPECT_EQ(stats.total(3), 0u);
}

TEST(CorpusStats, DuplicatedCorpusDoublesCounts) {
  Rng rng(1, "property");
  const auto corpus = random_corpus(rng, 12, 5);
  auto doubled = corpus;
  doubled.insert(doubled.end(), corpus.begin(), corpus.end());
  const auto once = build_corpus_stats(corpus);
  const auto twice = build_corpus_stats(doubled);
  for (int order = 1; order <= 3; ++order) {
    EXPECT_EQ(twice.total(order), 2 * once.total(order));
    ASSERT_EQ(twice.counts(order).size(), once.counts(order).size());
    for (const auto &[ngram, c] : once.counts(order)) {
      EXPECT_EQ(twice.count(ngram, order), 2 * c);
    }
  }
}

TEST(CorpusStats, TotalsMatchSentenceLengths) {
  Rng rng(2, "property");
  for (int round = 0; round < 50; ++round) {
    const auto corpus = random_corpus(rng, 1 + rng.index(20), 6);
    std::uint64_t uc = 0;
    std::uint64_t bc = 0;
    std::uint64_t tc = 0;
    for (const auto &s : corpus) {
      uc += s.size();
      bc += s.size() > 1 ? s.size() - 1 : 0;
      tc += s.size() > 2 ? s.size() - 2 : 0;
    }
    const auto stats = build_corpus_stats(corpus);
    ASSERT_EQ(stats.total(1), uc);
    ASSERT_EQ(stats.total(2), bc);
    ASSERT_EQ(stats.total(3), tc);
  }
}

TEST(CorpusStats, EmptyCorpus) {
  EXPECT_EQ(code_of([] { build_corpus_stats(std::vector<Sentence>{}); }), ErrorCode::kEmptyCorpus);
  EXPECT_EQ(code_of([] { ngram_scores(std::vector<Sentence>{}, 1, EntropyDirection::kHighEntropyEasy); }),
            ErrorCode::kEmptyCorpus);
  EXPECT_EQ(code_of([] { sentence_length_scores(std::vector<Sentence>{}, LengthDirection::kLongEasy); }),
            ErrorCode::kEmptyCorpus);
}

TEST(CorpusStats, FilesRoundTrip) {
  Rng rng(3, "property");
  const auto stats = build_corpus_stats(random_corpus(rng, 15, 7));
  const auto dir = std::filesystem::temp_directory_path() / "curriculum_stats_test";
  write_corpus_stats(stats, dir.string());
  EXPECT_TRUE(std::filesystem::exists(dir / "unigrams.tsv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "bigrams.tsv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "trigrams.tsv"));
  EXPECT_EQ(read_corpus_stats(dir.string()), stats);
  std::filesystem::remove_all(dir);
}

TEST(NgramEntropy, HandComputedValues) {
  const auto corpus = corpus_of({"a b", "a c"});
  const auto stats = build_corpus_stats(corpus);
  const double unigram = -(0.5 * std::log(0.5) + 0.25 * std::log(0.25));
  EXPECT_NEAR(ngram_entropy(corpus[0], stats, 1), unigram, 1e-15);
  EXPECT_NEAR(ngram_entropy(corpus[0], stats, 1), 0.693147, 5e-7);
  EXPECT_NEAR(ngram_entropy(corpus[0], stats, 2), 0.346574, 5e-7);
  EXPECT_EQ(ngram_entropy(corpus[0], stats, 3), 0.0);
}

TEST(NgramEntropy, RepeatedNgramCountsEachOccurrence) {
  const auto corpus = corpus_of({"a a b"});
  const auto stats = build_corpus_stats(corpus);
  const double pa = 2.0 / 3.0;
  const double pb = 1.0 / 3.0;
  EXPECT_NEAR(ngram_entropy(corpus[0], stats, 1), -(2.0 * pa * std::log(pa) + pb * std::log(pb)),
              1e-15);
}

TEST(NgramEntropy, UnknownNgram) {
  const auto stats = build_corpus_stats(corpus_of({"a b"}));
  EXPECT_EQ(code_of([&] { ngram_entropy(tokenize("a z"), stats, 1); }), ErrorCode::kUnknownNgram);
  EXPECT_EQ(code_of([&] { ngram_entropy(tokenize("b a"), stats, 2); }), ErrorCode::kUnknownNgram);
}

TEST(NgramEntropy, UnigramAdditiveOverConcatenation) {
  Rng rng(4, "property");
  for (int round = 0; round < 100; ++round) {
    const auto corpus = random_corpus(rng, 10, 5);
    const auto stats = build_corpus_stats(corpus);
    const auto &s1 = corpus[rng.index(corpus.size())];
    const auto &s2 = corpus[rng.index(corpus.size())];
    Sentence joined = s1;
    joined.tokens.insert(joined.tokens.end(), s2.tokens.begin(), s2.tokens.end());
    ASSERT_NEAR(ngram_entropy(joined, stats, 1),
                ngram_entropy(s1, stats, 1) + ngram_entropy(s2, stats, 1), 1e-12);
  }
}

TEST(NgramEntropy, UnigramValueIgnoresTokenOrder) {
  Rng rng(8, "property");
  for (int round = 0; round < 100; ++round) {
    const auto corpus = random_corpus(rng, 10, 7);
    const auto stats = build_corpus_stats(corpus);
    Sentence shuffled = corpus[0];
    rng.shuffle(std::span<std::string>(shuffled.tokens));
    ASSERT_EQ(ngram_entropy(shuffled, stats, 1), ngram_entropy(corpus[0], stats, 1));
  }
}

TEST(NgramEntropy, MatchesBruteForce) {
  Rng rng(5, "property");
  for (int round = 0; round < 30; ++round) {
    const auto corpus = random_corpus(rng, 10, 4 + rng.index(6));
    std::vector<std::vector<std::string>> raw;
    for (const auto &s : corpus) {
      raw.push_back(s.tokens);
    }
    const auto stats = build_corpus_stats(corpus);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      for (int order = 1; order <= 3; ++order) {
        ASSERT_NEAR(ngram_entropy(corpus[i], stats, order),
                    oracle::brute_force_entropy(raw, i, static_cast<std::size_t>(order)), 1e-12);
      }
    }
  }
}

TEST(NgramScores, NormalizedEntropies) {
  const auto s = ngram_scores(corpus_of({"a b", "a c a"}), 1, EntropyDirection::kHighEntropyEasy);
  EXPECT_EQ(s.size(), 2u);

  const std::vector<double> entropies = {std::log(2.0), std::log(2.0) / 2.0};
  const auto high = entropy_to_scores(entropies, EntropyDirection::kHighEntropyEasy);
  EXPECT_NEAR(high[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(high[1], 1.0 / 3.0, 1e-15);
  const auto low = entropy_to_scores(entropies, EntropyDirection::kLowEntropyEasy);
  EXPECT_NEAR(low[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(low[1], 2.0 / 3.0, 1e-15);
}

TEST(NgramScores, EqualEntropiesAreUniform) {
  for (auto direction : {EntropyDirection::kHighEntropyEasy, EntropyDirection::kLowEntropyEasy}) {
    for (double w : ngram_scores(corpus_of({"a b", "b a"}), 1, direction)) {
      EXPECT_EQ(w, 0.5);
    }
    // Single tokens never form a trigram, so every entropy is zero.
    for (double w : ngram_scores(corpus_of({"a", "b", "c", "d"}), 3, direction)) {
      EXPECT_EQ(w, 0.25);
    }
  }
}

TEST(NgramScores, ZeroEntropyUsesFloorWhenLowIsEasy) {
  const auto s = ngram_scores(corpus_of({"a b c", "a"}), 2, EntropyDirection::kLowEntropyEasy);
  EXPECT_GT(s[1], 0.999);
}

TEST(NgramScores, DirectionFlipReversesDistinctRanking) {
  Rng rng(6, "property");
  int checked = 0;
  for (int round = 0; round < 200; ++round) {
    const auto corpus = random_corpus(rng, 8, 6);
    const int order = 1 + static_cast<int>(rng.index(3));
    const auto stats = build_corpus_stats(corpus);
    std::set<double> distinct;
    for (const auto &s : corpus) {
      distinct.insert(ngram_entropy(s, stats, order));
    }
    if (distinct.size() != corpus.size()) {
      continue;
    }
    const auto high = ngram_scores(corpus, order, EntropyDirection::kHighEntropyEasy);
    const auto low = ngram_scores(corpus, order, EntropyDirection::kLowEntropyEasy);
    ASSERT_EQ(argsort_descending(low.weights()), reversed(argsort_descending(high.weights())));
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(SentenceLength, HandComputed) {
  const auto corpus = corpus_of({"a b c d", "e"});
  const auto long_easy = sentence_length_scores(corpus, LengthDirection::kLongEasy);
  EXPECT_NEAR(long_easy[0], 0.8, 1e-15);
  EXPECT_NEAR(long_easy[1], 0.2, 1e-15);
  const auto short_easy = sentence_length_scores(corpus, LengthDirection::kShortEasy);
  EXPECT_NEAR(short_easy[0], 0.2, 1e-15);
  EXPECT_NEAR(short_easy[1], 0.8, 1e-15);
}

TEST(SentenceLength, EqualLengthsAreUniform) {
  for (double w : sentence_length_scores(corpus_of({"a b", "c d", "e f"}), LengthDirection::kShortEasy)) {
    EXPECT_NEAR(w, 1.0 / 3.0, 1e-15);
  }
}

TEST(SentenceLength, DirectionFlipReversesDistinctRanking) {
  Rng rng(7, "property");
  for (int round = 0; round < 100; ++round) {
    std::vector<std::size_t> lengths(20);
    std::iota(lengths.begin(), lengths.end(), 1);
    rng.shuffle(std::span<std::size_t>(lengths));
    const std::size_t n = 1 + rng.index(lengths.size());
    std::vector<Sentence> corpus;
    for (std::size_t i = 0; i < n; ++i) {
      corpus.push_back(Sentence{std::vector<std::string>(lengths[i], "x")});
    }
    const auto longer = sentence_length_scores(corpus, LengthDirection::kLongEasy);
    const auto shorter = sentence_length_scores(corpus, LengthDirection::kShortEasy);
    ASSERT_EQ(argsort_descending(shorter.weights()), reversed(argsort_descending(longer.weights())));
  }
}

TEST(SentencesOf, RecoversTokenStrings) {
  auto vocab = std::make_shared<Vocabulary>();
  const TokenId a = vocab->add("alpha");
  const TokenId b = vocab->add("beta");
  const Dataset d({{TokenSequence{a, b, a}, 0}, {TokenSequence{b}, 1}}, 2, DataKind::kText, vocab);
  const auto sentences = sentences_of(d);
  ASSERT_EQ(sentences.size(), 2u);
  EXPECT_EQ(sentences[0].tokens, (std::vector<std::string>{"alpha", "beta", "alpha"}));
  EXPECT_EQ(sentences[1].tokens, (std::vector<std::string>{"beta"}));

  const Dataset dense({{DenseFeatures{1.0}, 0}}, 1, DataKind::kDense);
  EXPECT_EQ(code_of([&] { sentences_of(dense); }), ErrorCode::kShapeMismatch);
}

}  // namespace
}  // namespace curriculum::text
