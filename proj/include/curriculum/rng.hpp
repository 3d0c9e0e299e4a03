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
#ifndef CURRICULUM_RNG_HPP_
#define CURRICULUM_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace curriculum {

// Well-known stream labels. Keeping draws for different purposes on separate
// streams means that adding a draw in one place never shifts another.
namespace streams {
inline constexpr std::string_view kInit = "init";
inline constexpr std::string_view kSplit = "split";
inline constexpr std::string_view kPcl = "pcl";
inline constexpr std::string_view kShuffle = "shuffle";
}  // namespace streams

// Mixes a master seed with a sequence of labels into a new 64-bit seed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> labels);
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index);

/// Deterministic random source keyed by (seed, stream).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Distributions are implemented here rather than taken from
/// <random>, since the standard distributions are implementation-defined and
/// would break cross-platform reproducibility.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::string_view stream);

  std::uint64_t seed() const noexcept { return seed_; }
  const std::string &stream() const noexcept { return stream_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  /// Standard normal deviate (Marsaglia polar method).
  double normal();

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[index(i)]);
    }
  }

  /// Child stream "<stream>/<label>" with the same seed.
  Rng derive(std::string_view label) const;

 private:
  std::uint64_t seed_;
  std::string stream_;
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace curriculum

#endif  // CURRICULUM_RNG_HPP_
