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

#ifndef LIGHTCONV_PIPELINE_H_
#define LIGHTCONV_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lightconv/signal_io.h"

namespace lightconv {

// Load -> high-pass each channel -> cut epochs -> subject-level split.
struct PrepareOptions {
  bool highpass = true;
  double cutoff_hz = 1.0;
  int filter_order = 4;
  double epoch_seconds = 5.0;
  SplitRatios ratios;
  std::uint64_t seed = 0;
};

// Zero-phase Butterworth high-pass of every channel (when enabled).
SubjectRecording FilterRecording(const SubjectRecording& recording,
                                 const PrepareOptions& options);

DatasetSplit PrepareDataset(const Manifest& manifest, const PrepareOptions& options);

// On-disk record of a prepared split: the inputs needed to rebuild it and the
// resulting subject and epoch assignments.
struct SplitIndex {
  std::string manifest_path;  // absolute
  PrepareOptions options;
  double fs = 0.0;
  std::size_t channels = 0;
  std::size_t epoch_len = 0;
  struct Subject {
    std::string id;
    ClassLabel label = ClassLabel::kControl;
    Partition partition = Partition::kTrain;
    int epochs = 0;
  };
  struct EpochEntry {
    std::string subject_id;
    int epoch_index = 0;
    Partition partition = Partition::kTrain;
  };
  std::vector<Subject> subjects;    // sorted by id
  std::vector<EpochEntry> epochs;   // train, then validation, then test
};

SplitIndex MakeSplitIndex(const DatasetSplit& split,
                          const std::filesystem::path& manifest_path,
                          const Manifest& manifest, const PrepareOptions& options);

std::string SplitIndexToJson(const SplitIndex& index);
SplitIndex ParseSplitIndex(std::string_view json_text);

void WriteSplitIndex(const std::filesystem::path& path, const SplitIndex& index);
SplitIndex ReadSplitIndex(const std::filesystem::path& path);

// Re-runs preparation from the recorded manifest and options, and checks the
// result against the recorded assignment.
DatasetSplit LoadSplit(const SplitIndex& index);

}  // namespace lightconv

#endif  // LIGHTCONV_PIPELINE_H_
