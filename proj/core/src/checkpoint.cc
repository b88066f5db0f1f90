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

#include "lightconv/checkpoint.h"

#include <bit>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include "lightconv/error.h"

namespace lightconv {
namespace {

using nlohmann::json;

void AppendLittleEndian(std::string& out, double value) {
  const auto bits = std::bit_cast<std::uint64_t>(value);
  for (int byte = 0; byte < 8; ++byte) {
    out.push_back(static_cast<char>((bits >> (8 * byte)) & 0xff));
  }
}

double ReadLittleEndian(std::string_view bytes, std::size_t offset) {
  std::uint64_t bits = 0;
  for (int byte = 0; byte < 8; ++byte) {
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + byte]))
            << (8 * byte);
  }
  return std::bit_cast<double>(bits);
}

}  // namespace

std::string EncodeCheckpoint(const ModelParams& params, std::uint64_t seed) {
  params.CheckShapes();
  const auto& c = params.config;
  json header;
  header["format_version"] = kCheckpointFormatVersion;
  header["seed"] = seed;
  header["config"] = {{"in_channels", c.in_channels},
                      {"out_channels", c.out_channels},
                      {"kernel", c.kernel},
                      {"classes", c.classes},
                      {"dropout_rate", c.dropout_rate}};
  header["arrays"] = json::array(
      {{{"name", "conv_weight"},
        {"shape", {c.out_channels, c.in_channels, c.kernel}}},
       {{"name", "conv_bias"}, {"shape", {c.out_channels}}},
       {{"name", "fc_weight"}, {"shape", {c.classes, c.out_channels}}},
       {{"name", "fc_bias"}, {"shape", {c.classes}}}});

  std::string out = header.dump();
  out.push_back('\n');
  ForEachBlock(params, [&](std::string_view, std::span<const double> values) {
    for (double v : values) AppendLittleEndian(out, v);
  });
  return out;
}

Checkpoint DecodeCheckpoint(std::string_view bytes) {
  const std::size_t newline = bytes.find('\n');
  if (newline == std::string_view::npos) {
    throw ParseError("checkpoint header is not newline-terminated");
  }
  Checkpoint ckpt;
  try {
    const json header = json::parse(bytes.substr(0, newline));
    const int version = header.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion) {
      throw ParseError("unsupported checkpoint format_version " +
                       std::to_string(version));
    }
    ckpt.seed = header.at("seed").get<std::uint64_t>();
    const auto& cfg = header.at("config");
    ModelConfig config;
    config.in_channels = cfg.at("in_channels").get<int>();
    config.out_channels = cfg.at("out_channels").get<int>();
    config.kernel = cfg.at("kernel").get<int>();
    config.classes = cfg.at("classes").get<int>();
    config.dropout_rate = cfg.value("dropout_rate", 0.1);
    ckpt.params = ModelParams::Zeros(config);
  } catch (const json::exception& e) {
    throw ParseError(std::string("checkpoint header: ") + e.what());
  } catch (const InvalidArgumentError& e) {
    throw ParseError(std::string("checkpoint header: ") + e.what());
  }

  std::size_t offset = newline + 1;
  const std::size_t expected =
      8 * static_cast<std::size_t>(CountParams(ckpt.params.config).total());
  if (bytes.size() - offset != expected) {
    throw ParseError("checkpoint payload has " + std::to_string(bytes.size() - offset) +
                     " bytes, expected " + std::to_string(expected));
  }
  ForEachBlock(ckpt.params, [&](std::string_view, std::span<double> values) {
    for (double& v : values) {
      v = ReadLittleEndian(bytes, offset);
      offset += 8;
    }
  });
  return ckpt;
}

void SaveCheckpoint(const std::filesystem::path& path, const ModelParams& params,
                    std::uint64_t seed) {
  const std::string bytes = EncodeCheckpoint(params, seed);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for checkpoint '" + path.string() + "'");
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return DecodeCheckpoint(buffer.str());
}

}  // namespace lightconv
