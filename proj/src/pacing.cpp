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
#include "curriculum/pacing.hpp"

#include <numeric>
#include <string>

#include "curriculum/error.hpp"

namespace curriculum {

std::size_t PacingSchedule::presentations() const {
  return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
}

PacingSchedule staircase_pacing(std::size_t dataset_size, std::size_t epochs) {
  if (dataset_size < 3 || epochs < 3) {
    raise(ErrorCode::kTooSmall, "staircase pacing needs N >= 3 and T >= 3 (got N=" +
                                    std::to_string(dataset_size) +
                                    ", T=" + std::to_string(epochs) + ")");
  }
  const std::size_t first_stage_end = epochs / 3;
  const std::size_t second_stage_end = 2 * epochs / 3;
  PacingSchedule schedule;
  schedule.sizes.reserve(epochs);
  for (std::size_t e = 0; e < epochs; ++e) {
    if (e < first_stage_end) {
      schedule.sizes.push_back(dataset_size / 3);
    } else if (e < second_stage_end) {
      schedule.sizes.push_back(2 * dataset_size / 3);
    } else {
      schedule.sizes.push_back(dataset_size);
    }
  }
  return schedule;
}

PacingSchedule full_pacing(std::size_t dataset_size, std::size_t epochs) {
  if (dataset_size == 0 || epochs == 0) {
    raise(ErrorCode::kTooSmall, "full pacing needs a non-empty dataset and at least one epoch");
  }
  return PacingSchedule{std::vector<std::size_t>(epochs, dataset_size)};
}

}  // namespace curriculum
