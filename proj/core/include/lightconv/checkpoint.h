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

#ifndef LIGHTCONV_CHECKPOINT_H_
#define LIGHTCONV_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "lightconv/model.h"

namespace lightconv {

inline constexpr int kCheckpointFormatVersion = 1;

struct Checkpoint {
  ModelParams params;
  std::uint64_t seed = 0;
};

// Layout (see docs/checkpoint_format.md): one line of compact JSON
// {"arrays":[...],"config":{...},"format_version":1,"seed":N} terminated by
// '\n', then conv_weight, conv_bias, fc_weight and fc_bias as consecutive
// little-endian IEEE-754 binary64 values.
std::string EncodeCheckpoint(const ModelParams& params, std::uint64_t seed);
Checkpoint DecodeCheckpoint(std::string_view bytes);

void SaveCheckpoint(const std::filesystem::path& path, const ModelParams& params,
                    std::uint64_t seed);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace lightconv

#endif  // LIGHTCONV_CHECKPOINT_H_
