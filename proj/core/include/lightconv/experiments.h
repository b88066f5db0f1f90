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

#ifndef LIGHTCONV_EXPERIMENTS_H_
#define LIGHTCONV_EXPERIMENTS_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lightconv/metrics.h"
#include "lightconv/model.h"
#include "lightconv/signal_io.h"
#include "lightconv/train.h"

namespace lightconv {

enum class SweepParameter { kKernelSize, kOutChannels };
const char* SweepParameterName(SweepParameter p);
SweepParameter ParseSweepParameter(std::string_view text);

enum class SeedPolicy { kFixed, kPerValue };
SeedPolicy ParseSeedPolicy(std::string_view text);

struct SweepConfig {
  SweepParameter parameter = SweepParameter::kKernelSize;
  std::vector<int> values;
  TrainConfig base_train_config;
  ModelConfig base_model_config;
  SeedPolicy seed_policy = SeedPolicy::kFixed;

  // Kernel values must be odd and >= 3, channel values >= 1.
  void Validate() const;
};

// 11, 13, ..., 39.
std::vector<int> DefaultKernelSweep();
// 20, 30, 40, 50, 59.
std::vector<int> DefaultChannelSweep();

// Model and training configs for sweep point `index`; they differ from the
// base configs only in the swept field and, under kPerValue, the seed.
ModelConfig SweepModelConfig(const SweepConfig& config, std::size_t index);
TrainConfig SweepTrainConfig(const SweepConfig& config, std::size_t index);

inline constexpr std::array<std::string_view, 5> kMetricNames{
    "precision", "recall", "f1", "auc", "accuracy"};

struct SweepPoint {
  int value = 0;
  ModelConfig model_config;
  TrainConfig train_config;
  std::optional<MetricsReport> metrics;
  std::string error;  // set when training or evaluation failed
};

struct AblationReport {
  SweepParameter parameter = SweepParameter::kKernelSize;
  std::vector<SweepPoint> points;
  // normalized[m][p]: metric kMetricNames[m] of point p scaled to [0, 1]
  // across the sweep; NaN where the point has no value.
  std::array<std::vector<double>, kMetricNames.size()> normalized;
};

// Min-max scaling ignoring NaNs; a constant array maps to all ones.
std::vector<double> NormalizeMetric(std::span<const double> values);

// Trains and evaluates (on the test partition) one model per sweep value.
// A failing point is recorded and the sweep continues.
AblationReport RunSweep(const SweepConfig& config, const DatasetSplit& data);

// Columns: value, precision, recall, f1, auc, accuracy, normalized_* and
// error.
std::string AblationCsv(const AblationReport& report);
std::string AblationJson(const AblationReport& report);

// Per-sample mean across channels.
std::vector<double> ChannelAverage(const Array2D& data);

struct GroupPsd {
  ClassLabel label = ClassLabel::kControl;
  std::size_t count = 0;
  std::vector<double> mean;
  std::vector<double> sem;  // sample standard deviation / sqrt(count)
};

struct GroupPsdReport {
  std::vector<double> freqs;
  GroupPsd control;
  GroupPsd pd;
};

// Channel-average each epoch, Welch PSD per epoch, then the mean and standard
// error of the mean across epochs of each class. Both classes must be present.
GroupPsdReport ComputeGroupPsd(std::span<const Epoch> epochs, double fs,
                               std::size_t window_len, double overlap = 0.5);

// "freq,mean_control,sem_control,mean_pd,sem_pd"
void WriteGroupPsdCsv(const std::filesystem::path& path,
                      const GroupPsdReport& report);

}  // namespace lightconv

#endif  // LIGHTCONV_EXPERIMENTS_H_
