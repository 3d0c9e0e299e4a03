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
#include "curriculum/rng.hpp"

#include <cmath>

#include "curriculum/error.hpp"

namespace curriculum {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text, std::uint64_t hash = kFnvOffset) {
  for (unsigned char c : text) {
    hash ^= c;
    hash *= kFnvPrime;
  }
  return hash;
}

std::uint64_t mix(std::uint64_t seed, std::string_view label) {
  // The length prefix keeps ("ab","c") and ("a","bc") apart.
  std::uint64_t h = fnv1a(label, kFnvOffset ^ splitmix64(label.size()));
  return splitmix64(seed ^ splitmix64(h));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> labels) {
  std::uint64_t seed = splitmix64(master);
  for (auto label : labels) {
    seed = mix(seed, label);
  }
  return seed;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index) {
  return derive_seed(master, {label, std::to_string(index)});
}

Rng::Rng(std::uint64_t seed, std::string_view stream)
    : seed_(seed), stream_(stream), engine_(mix(splitmix64(seed), stream)) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) {
    raise(ErrorCode::kZeroLength, "Rng::index requires a positive bound");
  }
  const std::uint64_t bound = n;
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = max() - (max() % bound + 1) % bound;
  std::uint64_t draw = engine_();
  while (draw > limit) {
    draw = engine_();
  }
  return static_cast<std::size_t>(draw % bound);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

Rng Rng::derive(std::string_view label) const {
  std::string child = stream_;
  child += '/';
  child += label;
  return Rng(seed_, child);
}

}  // namespace curriculum
