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
#include "curriculum/scoring_text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace curriculum::text {
namespace {

constexpr double kEntropyFloor = 1e-12;
constexpr const char *kStatsFiles[CorpusStats::kMaxOrder] = {"unigrams.tsv", "bigrams.tsv",
                                                             "trigrams.tsv"};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

void check_order(int order) {
  if (order < 1 || order > CorpusStats::kMaxOrder) {
    raise(ErrorCode::kInvalidConfig, "n-gram order must be 1, 2 or 3");
  }
}

}  // namespace

Sentence tokenize(std::string_view raw) {
  Sentence s;
  std::size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && is_space(raw[i])) {
      ++i;
    }
    std::size_t end = i;
    while (end < raw.size() && !is_space(raw[end])) {
      ++end;
    }
    std::size_t first = i;
    std::size_t last = end;
    while (first < last && is_punct(raw[first])) {
      ++first;
    }
    while (last > first && is_punct(raw[last - 1])) {
      --last;
    }
    if (first < last) {
      std::string token(raw.substr(first, last - first));
      std::transform(token.begin(), token.end(), token.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      s.tokens.push_back(std::move(token));
    }
    i = end;
  }
  if (s.tokens.empty()) {
    raise(ErrorCode::kEmptyAfterTokenize, "no tokens in \"" + std::string(raw) + "\"");
  }
  return s;
}

std::string join_ngram(const Sentence &s, std::size_t pos, int order) {
  std::string key = s.tokens.at(pos);
  for (int k = 1; k < order; ++k) {
    key += ' ';
    key += s.tokens.at(pos + static_cast<std::size_t>(k));
  }
  return key;
}

std::size_t CorpusStats::index(int order) {
  check_order(order);
  return static_cast<std::size_t>(order - 1);
}

std::uint64_t CorpusStats::count(const std::string &ngram, int order) const {
  const auto &table = counts_[index(order)];
  auto it = table.find(ngram);
  return it == table.end() ? 0 : it->second;
}

std::uint64_t CorpusStats::count(const Sentence &s, std::size_t pos, int order) const {
  return count(join_ngram(s, pos, order), order);
}

void CorpusStats::add(const Sentence &s) {
  for (int order = 1; order <= kMaxOrder; ++order) {
    const auto n = static_cast<std::size_t>(order);
    for (std::size_t pos = 0; pos + n <= s.size(); ++pos) {
      add_count(join_ngram(s, pos, order), order, 1);
    }
  }
}

void CorpusStats::add_count(const std::string &ngram, int order, std::uint64_t count) {
  const auto i = index(order);
  counts_[i][ngram] += count;
  totals_[i] += count;
}

CorpusStats build_corpus_stats(std::span<const Sentence> corpus) {
  if (corpus.empty()) {
    raise(ErrorCode::kEmptyCorpus, "corpus has no sentences");
  }
  CorpusStats stats;
  for (const auto &s : corpus) {
    stats.add(s);
  }
  return stats;
}

double ngram_entropy(const Sentence &s, const CorpusStats &stats, int order) {
  check_order(order);
  const auto n = static_cast<std::size_t>(order);
  if (s.size() < n) {
    return 0.0;
  }
  const double total = static_cast<double>(stats.total(order));
  std::vector<double> terms;
  terms.reserve(s.size() + 1 - n);
  for (std::size_t pos = 0; pos + n <= s.size(); ++pos) {
    const std::string key = join_ngram(s, pos, order);
    const std::uint64_t c = stats.count(key, order);
    if (c == 0) {
      raise(ErrorCode::kUnknownNgram, "n-gram \"" + key + "\" is not in the corpus statistics");
    }
    const double p = static_cast<double>(c) / total;
    terms.push_back(-p * std::log(p));
  }
  // Sentences holding the same n-grams in any order get bitwise-equal values.
  std::sort(terms.begin(), terms.end());
  double entropy = 0.0;
  for (double t : terms) {
    entropy += t;
  }
  return entropy;
}

ScoreVector entropy_to_scores(std::span<const double> entropies, EntropyDirection direction) {
  if (entropies.empty()) {
    raise(ErrorCode::kEmptyCorpus, "no entropies to score");
  }
  const bool all_equal = std::all_of(entropies.begin(), entropies.end(),
                                     [&](double e) { return e == entropies.front(); });
  if (all_equal) {
    return uniform_scores(entropies.size());
  }
  if (direction == EntropyDirection::kHighEntropyEasy) {
    return ScoreVector::normalize(entropies);
  }
  std::vector<double> inverted(entropies.size());
  std::transform(entropies.begin(), entropies.end(), inverted.begin(),
                 [](double e) { return 1.0 / std::max(e, kEntropyFloor); });
  return ScoreVector::normalize(inverted);
}

ScoreVector ngram_scores(std::span<const Sentence> corpus, int order, EntropyDirection direction) {
  const CorpusStats stats = build_corpus_stats(corpus);
  std::vector<double> entropies;
  entropies.reserve(corpus.size());
  for (const auto &s : corpus) {
    entropies.push_back(ngram_entropy(s, stats, order));
  }
  return entropy_to_scores(entropies, direction);
}

ScoreVector sentence_length_scores(std::span<const Sentence> corpus, LengthDirection direction) {
  if (corpus.empty()) {
    raise(ErrorCode::kEmptyCorpus, "corpus has no sentences");
  }
  std::vector<double> raw;
  raw.reserve(corpus.size());
  for (const auto &s : corpus) {
    if (s.size() == 0) {
      raise(ErrorCode::kEmptyAfterTokenize, "sentence with no tokens");
    }
    const double length = static_cast<double>(s.size());
    raw.push_back(direction == LengthDirection::kLongEasy ? length : 1.0 / length);
  }
  return ScoreVector::normalize(raw);
}

std::vector<Sentence> sentences_of(const Dataset &d) {
  if (d.kind() != DataKind::kText || !d.vocabulary()) {
    raise(ErrorCode::kShapeMismatch, "text scoring needs a text dataset with a vocabulary");
  }
  const Vocabulary &vocab = *d.vocabulary();
  std::vector<Sentence> out;
  out.reserve(d.size());
  for (const auto &sample : d.samples()) {
    Sentence s;
    for (TokenId t : sample.tokens()) {
      s.tokens.push_back(vocab.token(t));
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_corpus_stats(const CorpusStats &stats, const std::string &directory) {
  std::filesystem::create_directories(directory);
  for (int order = 1; order <= CorpusStats::kMaxOrder; ++order) {
    const auto &table = stats.counts(order);
    std::vector<std::pair<std::string, std::uint64_t>> rows(table.begin(), table.end());
    std::sort(rows.begin(), rows.end());
    const auto path = std::filesystem::path(directory) / kStatsFiles[order - 1];
    std::ofstream out(path);
    if (!out) {
      raise(ErrorCode::kIoError, "cannot write " + path.string());
    }
    for (const auto &[ngram, count] : rows) {
      out << ngram << '\t' << count << '\n';
    }
  }
}

CorpusStats read_corpus_stats(const std::string &directory) {
  CorpusStats stats;
  for (int order = 1; order <= CorpusStats::kMaxOrder; ++order) {
    const auto path = std::filesystem::path(directory) / kStatsFiles[order - 1];
    std::ifstream in(path);
    if (!in) {
      raise(ErrorCode::kIoError, "cannot read " + path.string());
    }
    std::string line;
    while (std::getline(in, line)) {
      const auto tab = line.rfind('\t');
      if (tab == std::string::npos) {
        raise(ErrorCode::kParseError, "malformed row in " + path.string());
      }
      stats.add_count(line.substr(0, tab), order, std::stoull(line.substr(tab + 1)));
    }
  }
  return stats;
}

}  // namespace curriculum::text
