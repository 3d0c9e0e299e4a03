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
#ifndef CURRICULUM_PACING_HPP_
#define CURRICULUM_PACING_HPP_

#include <cstddef>
#include <vector>

namespace curriculum {

/// Number of training samples used in each epoch.
struct PacingSchedule {
  std::vector<std::size_t> sizes;

  std::size_t epochs() const { return sizes.size(); }
  std::size_t operator[](std::size_t epoch) const { return sizes[epoch]; }
  /// Total sample presentations over the run.
  std::size_t presentations() const;

  bool operator==(const PacingSchedule &) const = default;
};

/// Three-step staircase: floor(N/3) samples for the first floor(T/3) epochs,
/// floor(2N/3) up to epoch floor(2T/3), then all N. Throws TooSmall when N or
/// T is below 3.
PacingSchedule staircase_pacing(std::size_t dataset_size, std::size_t epochs);

/// Every epoch uses the whole dataset.
PacingSchedule full_pacing(std::size_t dataset_size, std::size_t epochs);

}  // namespace curriculum

#endif  // CURRICULUM_PACING_HPP_
