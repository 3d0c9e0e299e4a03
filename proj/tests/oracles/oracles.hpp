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
#ifndef CURRICULUM_TESTS_ORACLES_HPP_
#define CURRICULUM_TESTS_ORACLES_HPP_

// Independent reference computations for tests. Nothing here calls into the
// code paths it is used to check.

#include <cstddef>
#include <string>
#include <vector>

#include "curriculum/core.hpp"
#include "curriculum/nn.hpp"

namespace curriculum::oracle {

/// N-gram entropy by flat loops over raw token strings.
double brute_force_entropy(const std::vector<std::vector<std::string>> &corpus, std::size_t sentence,
                           std::size_t order);

/// Softmax cross-entropy of one dense sample by scalar loops over the
/// parameter matrices.
double straight_line_loss(const nn::ModelParams &params, const std::vector<double> &x,
                          std::size_t label);

/// Per-class quotas using floating-point remainders.
std::vector<std::size_t> quota(const std::vector<std::size_t> &class_sizes, std::size_t k);

/// Sorts every index by (score desc, index asc) once and walks the order,
/// taking a sample while its class still has quota left.
std::vector<std::size_t> greedy_selection(const std::vector<double> &scores,
                                          const std::vector<std::size_t> &labels,
                                          std::size_t class_count, std::size_t k);

/// Random dense dataset with every class present.
Dataset random_dense(std::size_t n, std::size_t dim, std::size_t classes, Rng &rng);

}  // namespace curriculum::oracle

#endif  // CURRICULUM_TESTS_ORACLES_HPP_
