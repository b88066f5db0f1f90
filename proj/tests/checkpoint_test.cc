// Copyright 2026 The lightconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <bit>
#include <cstring>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "lightconv/checkpoint.h"
#include "lightconv/error.h"
#include "test_util.h"

namespace lightconv {
namespace {

TEST(CheckpointTest, RoundTripIsBitExact) {
  testing::TempDir dir;
  Rng rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    ModelConfig c{1 + static_cast<int>(rng.Index(5)), 1 + static_cast<int>(rng.Index(5)),
                  1 + 2 * static_cast<int>(rng.Index(5)), 2};
    c.dropout_rate = 0.25;
    ModelParams p = InitParams(trial, c);
    for (double& b : p.conv_bias) b = rng.Normal() * 1e-300;  // subnormal-adjacent
    p.fc_bias[0] = -0.0;
    SaveCheckpoint(dir / "c.bin", p, 1234567890123ULL + trial);
    const Checkpoint loaded = LoadCheckpoint(dir / "c.bin");
    EXPECT_EQ(loaded.seed, 1234567890123ULL + trial);
    EXPECT_EQ(loaded.params.config, c);
    ASSERT_EQ(loaded.params.conv_weight.size(), p.conv_weight.size());
    for (std::size_t i = 0; i < p.conv_bias.size(); ++i) {
      EXPECT_EQ(std::bit_cast<std::uint64_t>(loaded.params.conv_bias[i]),
                std::bit_cast<std::uint64_t>(p.conv_bias[i]));
    }
    EXPECT_TRUE(std::signbit(loaded.params.fc_bias[0]));
    EXPECT_EQ(loaded.params, p);
  }
}

// Layout check written from the format description, not from the encoder.
TEST(CheckpointTest, DocumentedLayout) {
  ModelParams p = ModelParams::Zeros({1, 1, 1, 2});
  p.conv_weight = {1.5};
  p.conv_bias = {-2.0};
  p.fc_weight = {0.25, 0.5};
  p.fc_bias = {3.0, -4.0};
  const std::string bytes = EncodeCheckpoint(p, 7);
  const std::size_t nl = bytes.find('\n');
  ASSERT_NE(nl, std::string::npos);
  const auto header = nlohmann::json::parse(bytes.substr(0, nl));
  EXPECT_EQ(header.at("format_version"), 1);
  EXPECT_EQ(header.at("seed"), 7);
  EXPECT_EQ(header.at("config").at("kernel"), 1);
  ASSERT_EQ(header.at("arrays").size(), 4u);
  EXPECT_EQ(header.at("arrays")[0].at("name"), "conv_weight");
  EXPECT_EQ(header.at("arrays")[0].at("shape"), nlohmann::json({1, 1, 1}));
  EXPECT_EQ(header.at("arrays")[2].at("shape"), nlohmann::json({2, 1}));
  EXPECT_EQ(bytes.find('\n'), bytes.rfind('\n', nl));  // single-line header
  ASSERT_EQ(bytes.size(), nl + 1 + 6 * 8);
  const double expected[] = {1.5, -2.0, 0.25, 0.5, 3.0, -4.0};
  for (int i = 0; i < 6; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
      bits |= static_cast<std::uint64_t>(
                  static_cast<unsigned char>(bytes[nl + 1 + 8 * i + b]))
              << (8 * b);
    }
    EXPECT_EQ(std::bit_cast<double>(bits), expected[i]) << i;
  }
}

TEST(CheckpointTest, EncodingIsDeterministic) {
  const ModelParams p = InitParams(3, ModelConfig{});
  EXPECT_EQ(EncodeCheckpoint(p, 3), EncodeCheckpoint(p, 3));
}

TEST(CheckpointTest, CorruptInputsRejected) {
  const ModelParams p = InitParams(3, {2, 2, 3, 2});
  const std::string good = EncodeCheckpoint(p, 1);
  EXPECT_THROW(DecodeCheckpoint(good.substr(0, good.size() - 1)), ParseError);
  EXPECT_THROW(DecodeCheckpoint(good + "x"), ParseError);
  EXPECT_THROW(DecodeCheckpoint("no newline"), ParseError);
  EXPECT_THROW(DecodeCheckpoint("{\"format_version\":1}\n"), ParseError);
  std::string future = good;
  future.replace(future.find("\"format_version\":1"), 18, "\"format_version\":9");
  EXPECT_THROW(DecodeCheckpoint(future), ParseError);
  std::string even = good;
  even.replace(even.find("\"kernel\":3"), 10, "\"kernel\":4");
  EXPECT_THROW(DecodeCheckpoint(even), ParseError);
}

TEST(CheckpointTest, MissingFileNamesPath) {
  testing::TempDir dir;
  try {
    LoadCheckpoint(dir / "missing.bin");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("missing.bin"), std::string::npos);
  }
}

}  // namespace
}  // namespace lightconv
