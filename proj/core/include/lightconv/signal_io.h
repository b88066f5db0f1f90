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

#ifndef LIGHTCONV_SIGNAL_IO_H_
#define LIGHTCONV_SIGNAL_IO_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lightconv/array2d.h"

namespace lightconv {

// Binary class label. PD is the positive class for every metric.
enum class ClassLabel : int { kControl = 0, kPd = 1 };

inline int ToIndex(ClassLabel label) { return static_cast<int>(label); }
ClassLabel LabelFromIndex(int index);
// Accepts "PD"/"Control" (case-insensitive) or "1"/"0".
ClassLabel ParseLabel(std::string_view text);
const char* LabelName(ClassLabel label);

// One subject's continuous multichannel recording, [channels x time].
struct SubjectRecording {
  std::string subject_id;
  ClassLabel label = ClassLabel::kControl;
  double fs = 500.0;
  std::vector<std::string> channel_names;
  Array2D samples;

  std::size_t channels() const { return samples.rows(); }
  std::size_t length() const { return samples.cols(); }
};

// A fixed-length window of a recording; the network's input unit.
struct Epoch {
  Array2D data;
  ClassLabel label = ClassLabel::kControl;
  std::string subject_id;
  int epoch_index = 0;
};

enum class Partition { kTrain, kValidation, kTest };
const char* PartitionName(Partition partition);
Partition ParsePartition(std::string_view text);

struct SplitRatios {
  double train = 0.6;
  double validation = 0.2;
  double test = 0.2;
};

struct DatasetSplit {
  std::vector<Epoch> train;
  std::vector<Epoch> validation;
  std::vector<Epoch> test;
  std::uint64_t seed = 0;
  std::map<std::string, Partition> subject_assignment;

  const std::vector<Epoch>& partition(Partition p) const;
};

struct ManifestEntry {
  std::string subject_id;
  std::filesystem::path file;
  ClassLabel label = ClassLabel::kControl;
};

// {"fs": number, "channels": [string], "subjects": [{"id","file","label"}]}
// Relative file paths are resolved against the manifest's directory.
struct Manifest {
  double fs = 500.0;
  std::vector<std::string> channel_names;
  std::vector<ManifestEntry> entries;
};

Manifest LoadManifest(const std::filesystem::path& path);
void WriteManifest(const std::filesystem::path& path, const Manifest& manifest);

// Reads one subject CSV: header row of channel names, then one row per time
// sample. Error messages use 1-based file line numbers ("row") and 1-based
// column numbers.
SubjectRecording LoadSubjectCsv(const std::filesystem::path& path,
                                const ManifestEntry& entry,
                                const Manifest& manifest);

// Writes with 17 significant digits, so reloading reproduces every value.
void WriteSubjectCsv(const std::filesystem::path& path,
                     const SubjectRecording& recording);

// Splits into floor(length / (epoch_seconds * fs)) consecutive
// non-overlapping epochs; the trailing remainder is dropped.
std::vector<Epoch> EpochRecording(const SubjectRecording& recording,
                                  double epoch_seconds);

// Subject-level partition assignment. Ids are sorted before a seeded
// Fisher-Yates shuffle; the first round(train * N) shuffled subjects go to
// training, the next round(validation * N) to validation and the rest to
// test. Each partition keeps at least one subject.
std::map<std::string, Partition> AssignSubjects(
    std::vector<std::string> subject_ids, const SplitRatios& ratios,
    std::uint64_t seed);

// Routes pre-cut epochs to partitions by subject.
DatasetSplit SplitEpochs(std::vector<Epoch> epochs, const SplitRatios& ratios,
                         std::uint64_t seed);
// As above, but assigns over an explicit subject list, which may include
// subjects that contributed no epochs.
DatasetSplit SplitEpochs(std::vector<Epoch> epochs,
                         std::vector<std::string> subject_ids,
                         const SplitRatios& ratios, std::uint64_t seed);

DatasetSplit SplitDataset(const std::vector<SubjectRecording>& subjects,
                          const SplitRatios& ratios, std::uint64_t seed,
                          double epoch_seconds = 5.0);

}  // namespace lightconv

#endif  // LIGHTCONV_SIGNAL_IO_H_
