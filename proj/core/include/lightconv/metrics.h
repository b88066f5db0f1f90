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

#ifndef LIGHTCONV_METRICS_H_
#define LIGHTCONV_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lightconv/model.h"
#include "lightconv/signal_io.h"

namespace lightconv {

// Counts with PD (class 1) as the positive class.
struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix Confusion(std::span<const int> predictions,
                          std::span<const int> labels);

// 0/0 ratios are reported as 0 and flagged.
struct ScalarMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
};

ScalarMetrics ComputeScalarMetrics(const ConfusionMatrix& cm);

// Area under the ROC curve of `scores` (PD-class probability) against binary
// labels, by a trapezoidal sweep over distinct score thresholds. Tied scores
// form one diagonal ROC segment, which equals half credit per tied
// positive/negative pair. Throws when either class is absent.
double RocAuc(std::span<const double> scores, std::span<const int> labels);

struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  std::optional<double> auc;  // empty when the evaluated set has one class
  ConfusionMatrix confusion;
  std::int64_t n_epochs = 0;
  std::vector<std::string> warnings;
};

// Eval-mode forward on every epoch; each epoch is one classification.
MetricsReport Evaluate(const ModelParams& checkpoint, std::span<const Epoch> epochs);

std::string MetricsToJson(const MetricsReport& report);

// Header and one row in the column order PRC, Recall, F1, AUC, ACC:
// precision/recall/accuracy in percent with one decimal, F1 with two and AUC
// with three decimals. A missing AUC is written as "nan".
std::string MetricsCsvHeader();
std::string MetricsCsvRow(const MetricsReport& report);

}  // namespace lightconv

#endif  // LIGHTCONV_METRICS_H_
