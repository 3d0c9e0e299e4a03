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
#ifndef CURRICULUM_ERROR_HPP_
#define CURRICULUM_ERROR_HPP_

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace curriculum {

enum class ErrorCode {
  kEmptyDataset,
  kMissingClass,
  kRaggedFeatures,
  kClassTooSmall,
  kZeroLength,
  kInvalidScores,
  kInvalidSpec,
  kInvalidConfig,
  kShapeMismatch,
  kNonFiniteLoss,
  kEmptyInput,
  kLengthMismatch,
  kEmptyList,
  kEmptyAfterTokenize,
  kEmptyCorpus,
  kUnknownNgram,
  kTooSmall,
  kInfeasible,
  kBadMagic,
  kRagged,
  kUnknownLabel,
  kBadSpec,
  kIoError,
  kParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string &what);

// Non-fatal conditions (for instance a transfer scorer that is not larger than
// the trainee) are reported here. The default handler writes to std::clog.
using WarningHandler = std::function<void(std::string_view)>;

WarningHandler set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace curriculum

#endif  // CURRICULUM_ERROR_HPP_
