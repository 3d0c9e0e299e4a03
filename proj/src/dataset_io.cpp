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
#include "curriculum/dataset_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

#include "curriculum/scoring_text.hpp"

namespace curriculum::harness {
namespace {

constexpr std::uint32_t kIdxImageMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

std::uint32_t read_be32(std::istream &in, const std::string &path) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char *>(b.data()), 4)) {
    raise(ErrorCode::kRagged, path + ": truncated header");
  }
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) |
         std::uint32_t{b[3]};
}

void write_be32(std::ostream &out, std::uint32_t v) {
  const std::array<char, 4> b = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                                 static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b.data(), 4);
}

std::ifstream open_binary(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(ErrorCode::kIoError, "cannot open " + path);
  }
  return in;
}

ClassIndex parse_label(std::string_view field, const std::string &where) {
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) {
    field.remove_prefix(1);
  }
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) {
    field.remove_suffix(1);
  }
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    raise(ErrorCode::kUnknownLabel, where + ": label \"" + std::string(field) +
                                        "\" is not a non-negative integer");
  }
  return value;
}

std::size_t resolve_class_count(const std::vector<Sample> &samples, std::size_t class_count,
                                const std::string &path) {
  std::size_t inferred = 0;
  for (const auto &s : samples) {
    inferred = std::max(inferred, s.label + 1);
  }
  if (class_count == 0) {
    return inferred;
  }
  if (inferred > class_count) {
    raise(ErrorCode::kUnknownLabel, path + ": label " + std::to_string(inferred - 1) +
                                        " exceeds class count " + std::to_string(class_count));
  }
  return class_count;
}

}  // namespace

DataFormat parse_format(std::string_view name) {
  if (name == "idx") return DataFormat::kIdx;
  if (name == "csv") return DataFormat::kCsv;
  if (name == "tsv_text" || name == "tsv") return DataFormat::kTsvText;
  raise(ErrorCode::kInvalidConfig, "unknown data format \"" + std::string(name) + "\"");
}

std::string_view to_string(DataFormat format) {
  switch (format) {
    case DataFormat::kIdx: return "idx";
    case DataFormat::kCsv: return "csv";
    case DataFormat::kTsvText: return "tsv_text";
  }
  return "unknown";
}

Dataset load_idx(const std::string &images_path, const std::string &labels_path,
                 std::size_t class_count) {
  auto images = open_binary(images_path);
  if (read_be32(images, images_path) != kIdxImageMagic) {
    raise(ErrorCode::kBadMagic, images_path + " is not an IDX image file");
  }
  const std::uint32_t count = read_be32(images, images_path);
  const std::uint32_t rows = read_be32(images, images_path);
  const std::uint32_t cols = read_be32(images, images_path);

  auto labels = open_binary(labels_path);
  if (read_be32(labels, labels_path) != kIdxLabelMagic) {
    raise(ErrorCode::kBadMagic, labels_path + " is not an IDX label file");
  }
  if (read_be32(labels, labels_path) != count) {
    raise(ErrorCode::kRagged, "image and label counts differ");
  }

  const std::size_t pixels = std::size_t{rows} * cols;
  std::vector<unsigned char> buffer(pixels);
  std::vector<Sample> samples;
  samples.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    if (!images.read(reinterpret_cast<char *>(buffer.data()), static_cast<std::streamsize>(pixels))) {
      raise(ErrorCode::kRagged, images_path + ": truncated at image " + std::to_string(i));
    }
    char label = 0;
    if (!labels.get(label)) {
      raise(ErrorCode::kRagged, labels_path + ": truncated at label " + std::to_string(i));
    }
    DenseFeatures f(pixels);
    std::transform(buffer.begin(), buffer.end(), f.begin(),
                   [](unsigned char px) { return static_cast<double>(px) / 255.0; });
    samples.push_back({std::move(f), static_cast<unsigned char>(label)});
  }
  const auto classes = resolve_class_count(samples, class_count, labels_path);
  return Dataset(std::move(samples), classes, DataKind::kDense);
}

Dataset load_csv(const std::string &path, std::size_t class_count) {
  std::ifstream in(path);
  if (!in) {
    raise(ErrorCode::kIoError, "cannot open " + path);
  }
  std::vector<Sample> samples;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const std::string where = path + ":" + std::to_string(line_no);
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) {
        break;
      }
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() < 2) {
      raise(ErrorCode::kRagged, where + ": need a label and at least one feature");
    }
    DenseFeatures f;
    f.reserve(fields.size() - 1);
    for (std::size_t j = 1; j < fields.size(); ++j) {
      std::string field(fields[j]);
      char *end = nullptr;
      const double v = std::strtod(field.c_str(), &end);
      if (end == field.c_str() || !std::isfinite(v)) {
        raise(ErrorCode::kParseError, where + ": bad feature \"" + field + "\"");
      }
      f.push_back(v);
    }
    if (samples.empty()) {
      width = f.size();
    } else if (f.size() != width) {
      raise(ErrorCode::kRagged, where + ": expected " + std::to_string(width) + " features");
    }
    samples.push_back({std::move(f), parse_label(fields[0], where)});
  }
  const auto classes = resolve_class_count(samples, class_count, path);
  return Dataset(std::move(samples), classes, DataKind::kDense);
}

Dataset load_tsv_text(const std::string &path, std::size_t class_count,
                      std::shared_ptr<Vocabulary> vocabulary, bool grow) {
  std::ifstream in(path);
  if (!in) {
    raise(ErrorCode::kIoError, "cannot open " + path);
  }
  if (!vocabulary) {
    vocabulary = std::make_shared<Vocabulary>();
  }
  std::vector<Sample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const std::string where = path + ":" + std::to_string(line_no);
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      raise(ErrorCode::kRagged, where + ": expected label<TAB>text");
    }
    const ClassIndex label = parse_label(std::string_view(line).substr(0, tab), where);
    const text::Sentence sentence = text::tokenize(std::string_view(line).substr(tab + 1));
    TokenSequence tokens;
    tokens.reserve(sentence.size());
    for (const auto &t : sentence.tokens) {
      tokens.push_back(grow ? vocabulary->add(t) : vocabulary->lookup(t));
    }
    samples.push_back({std::move(tokens), label});
  }
  const auto classes = resolve_class_count(samples, class_count, path);
  return Dataset(std::move(samples), classes, DataKind::kText, std::move(vocabulary));
}

Dataset load_dataset(const DataSource &source, std::shared_ptr<Vocabulary> vocabulary,
                     bool grow_vocabulary) {
  switch (source.format) {
    case DataFormat::kIdx:
      return load_idx(source.path, source.labels_path, source.class_count);
    case DataFormat::kCsv:
      return load_csv(source.path, source.class_count);
    case DataFormat::kTsvText:
      return load_tsv_text(source.path, source.class_count, std::move(vocabulary), grow_vocabulary);
  }
  raise(ErrorCode::kInvalidConfig, "unknown data format");
}

void write_csv(const Dataset &d, const std::string &path) {
  std::ofstream out(path);
  if (!out) {
    raise(ErrorCode::kIoError, "cannot write " + path);
  }
  out.precision(17);
  for (const auto &s : d.samples()) {
    out << s.label;
    for (double v : s.features()) {
      out << ',' << v;
    }
    out << '\n';
  }
}

void write_idx(const Dataset &d, const std::string &images_path, const std::string &labels_path,
               std::size_t rows, std::size_t cols) {
  std::ofstream images(images_path, std::ios::binary);
  std::ofstream labels(labels_path, std::ios::binary);
  if (!images || !labels) {
    raise(ErrorCode::kIoError, "cannot write IDX files");
  }
  write_be32(images, kIdxImageMagic);
  write_be32(images, static_cast<std::uint32_t>(d.size()));
  write_be32(images, static_cast<std::uint32_t>(rows));
  write_be32(images, static_cast<std::uint32_t>(cols));
  write_be32(labels, kIdxLabelMagic);
  write_be32(labels, static_cast<std::uint32_t>(d.size()));
  for (const auto &s : d.samples()) {
    if (s.features().size() != rows * cols) {
      raise(ErrorCode::kRagged, "sample size does not match rows x cols");
    }
    for (double v : s.features()) {
      images.put(static_cast<char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
    }
    labels.put(static_cast<char>(s.label));
  }
}

}  // namespace curriculum::harness
