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
#ifndef CURRICULUM_DATASET_IO_HPP_
#define CURRICULUM_DATASET_IO_HPP_

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "curriculum/core.hpp"

namespace curriculum::harness {

enum class DataFormat { kIdx, kCsv, kTsvText };

DataFormat parse_format(std::string_view name);
std::string_view to_string(DataFormat format);

struct DataSource {
  DataFormat format = DataFormat::kCsv;
  std::string path;         // images for idx, the table otherwise
  std::string labels_path;  // idx only
  /// 0 infers max(label) + 1.
  std::size_t class_count = 0;
};

/// IDX image/label pair (magic 0x00000803 / 0x00000801, big-endian). Pixel
/// bytes are scaled to [0, 1].
Dataset load_idx(const std::string &images_path, const std::string &labels_path,
                 std::size_t class_count = 0);

/// One sample per row: integer label first, then real features.
Dataset load_csv(const std::string &path, std::size_t class_count = 0);

/// `label<TAB>text` per line. Tokens are added to `vocabulary` when `grow` is
/// set; otherwise unseen tokens map to the unknown id. A fresh vocabulary is
/// created when none is given.
Dataset load_tsv_text(const std::string &path, std::size_t class_count = 0,
                      std::shared_ptr<Vocabulary> vocabulary = nullptr, bool grow = true);

/// Dispatches on source.format.
Dataset load_dataset(const DataSource &source, std::shared_ptr<Vocabulary> vocabulary = nullptr,
                     bool grow_vocabulary = true);

/// Writers used for fixtures and exports.
void write_csv(const Dataset &d, const std::string &path);
void write_idx(const Dataset &d, const std::string &images_path, const std::string &labels_path,
               std::size_t rows, std::size_t cols);

}  // namespace curriculum::harness

#endif  // CURRICULUM_DATASET_IO_HPP_
