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
#include <filesystem>
#include <fstream>
#include <functional>

#include <gtest/gtest.h>

#include "curriculum/dataset_io.hpp"
#include "oracles/oracles.hpp"

namespace curriculum::harness {
namespace {

namespace fs = std::filesystem;

class DatasetIo : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("curriculum_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string &name, const std::string &content) {
    const auto path = (dir_ / name).string();
    std::ofstream(path, std::ios::binary) << content;
    return path;
  }

  static std::string be32(std::uint32_t v) {
    return {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
            static_cast<char>(v)};
  }

  fs::path dir_;
};

ErrorCode code_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIoError;
}

TEST_F(DatasetIo, IdxFourImages) {
  std::string pixels;
  for (int i = 0; i < 16; ++i) {
    pixels.push_back(static_cast<char>(i * 17));
  }
  const auto images = write("img.idx", be32(0x803) + be32(4) + be32(2) + be32(2) + pixels);
  const auto labels = write("lbl.idx", be32(0x801) + be32(4) + std::string("\x00\x01\x01\x00", 4));
  const auto d = load_idx(images, labels);
  ASSERT_EQ(d.size(), 4u);
  EXPECT_EQ(d.feature_dim(), 4u);
  EXPECT_EQ(d.class_count(), 2u);
  EXPECT_EQ(d.labels(), (std::vector<ClassIndex>{0, 1, 1, 0}));
  EXPECT_DOUBLE_EQ(d[0].features()[0], 0.0);
  EXPECT_DOUBLE_EQ(d[0].features()[1], 17.0 / 255.0);
  EXPECT_DOUBLE_EQ(d[3].features()[3], 1.0);
}

TEST_F(DatasetIo, IdxBadMagic) {
  const auto images = write("img.idx", be32(0x801) + be32(1) + be32(1) + be32(1) + "a");
  const auto labels = write("lbl.idx", be32(0x801) + be32(1) + std::string(1, '\0'));
  EXPECT_EQ(code_of([&] { load_idx(images, labels); }), ErrorCode::kBadMagic);
  EXPECT_EQ(code_of([&] { load_idx(labels, labels); }), ErrorCode::kBadMagic);
}

TEST_F(DatasetIo, IdxTruncated) {
  const auto images = write("img.idx", be32(0x803) + be32(2) + be32(2) + be32(2) + "abcd");
  const auto labels = write("lbl.idx", be32(0x801) + be32(2) + std::string(2, '\0'));
  EXPECT_EQ(code_of([&] { load_idx(images, labels); }), ErrorCode::kRagged);
}

TEST_F(DatasetIo, IdxRoundTrip) {
  Rng rng(1, "data");
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < 6; ++i) {
    DenseFeatures f(6);
    for (auto &v : f) {
      v = static_cast<double>(rng.index(256)) / 255.0;
    }
    samples.push_back({f, i % 3});
  }
  const Dataset d(std::move(samples), 3, DataKind::kDense);
  const auto images = (dir_ / "i.idx").string();
  const auto labels = (dir_ / "l.idx").string();
  write_idx(d, images, labels, 2, 3);
  const auto back = load_idx(images, labels);
  EXPECT_EQ(back.digest(), d.digest());
}

TEST_F(DatasetIo, CsvRow) {
  const auto d = load_csv(write("a.csv", "1,0.5,0.25\n0,1,2\n"));
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].label, 1u);
  EXPECT_EQ(d[0].features(), (DenseFeatures{0.5, 0.25}));
  EXPECT_EQ(d.class_count(), 2u);
}

TEST_F(DatasetIo, CsvRagged) {
  EXPECT_EQ(code_of([&] { load_csv(write("a.csv", "1,0.5,0.25\n0,1\n")); }), ErrorCode::kRagged);
}

TEST_F(DatasetIo, CsvUnknownLabel) {
  EXPECT_EQ(code_of([&] { load_csv(write("a.csv", "x,0.5\n")); }), ErrorCode::kUnknownLabel);
  EXPECT_EQ(code_of([&] { load_csv(write("b.csv", "-1,0.5\n")); }), ErrorCode::kUnknownLabel);
  EXPECT_EQ(code_of([&] { load_csv(write("c.csv", "0,0.5\n5,1\n"), 2); }), ErrorCode::kUnknownLabel);
}

TEST_F(DatasetIo, CsvRoundTrip) {
  Rng rng(2, "data");
  const auto d = oracle::random_dense(20, 4, 3, rng);
  const auto path = (dir_ / "r.csv").string();
  write_csv(d, path);
  EXPECT_EQ(load_csv(path, 3).digest(), d.digest());
}

TEST_F(DatasetIo, TsvTextLine) {
  const auto d = load_tsv_text(write("a.tsv", "0\tthe cat sat\n1\tThe dog.\n"));
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.kind(), DataKind::kText);
  EXPECT_EQ(d[0].label, 0u);
  const auto &vocab = *d.vocabulary();
  ASSERT_EQ(d[0].tokens().size(), 3u);
  EXPECT_EQ(vocab.token(d[0].tokens()[0]), "the");
  EXPECT_EQ(vocab.token(d[0].tokens()[1]), "cat");
  EXPECT_EQ(vocab.token(d[0].tokens()[2]), "sat");
  EXPECT_EQ(d[1].tokens()[0], d[0].tokens()[0]);
}

TEST_F(DatasetIo, TsvFrozenVocabularyMapsUnseenToUnknown) {
  auto vocab = std::make_shared<Vocabulary>();
  vocab->add("cat");
  const auto d = load_tsv_text(write("a.tsv", "0\tcat zebra\n"), 1, vocab, false);
  EXPECT_EQ(d[0].tokens(), (TokenSequence{vocab->lookup("cat"), Vocabulary::kUnknown}));
  EXPECT_EQ(vocab->size(), 2u);
}

TEST_F(DatasetIo, TsvErrors) {
  EXPECT_EQ(code_of([&] { load_tsv_text(write("a.tsv", "0 no tab\n")); }), ErrorCode::kRagged);
  EXPECT_EQ(code_of([&] { load_tsv_text(write("b.tsv", "z\tword\n")); }), ErrorCode::kUnknownLabel);
}

TEST_F(DatasetIo, DispatchAndFormatNames) {
  EXPECT_EQ(parse_format("idx"), DataFormat::kIdx);
  EXPECT_EQ(parse_format("csv"), DataFormat::kCsv);
  EXPECT_EQ(parse_format("tsv_text"), DataFormat::kTsvText);
  EXPECT_THROW(parse_format("xml"), Error);
  DataSource source;
  source.format = DataFormat::kCsv;
  source.path = write("a.csv", "0,1\n1,2\n");
  EXPECT_EQ(load_dataset(source).size(), 2u);
  source.path = (dir_ / "missing.csv").string();
  EXPECT_EQ(code_of([&] { load_dataset(source); }), ErrorCode::kIoError);
}

}  // namespace
}  // namespace curriculum::harness
