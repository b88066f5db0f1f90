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

#include "lightconv/metrics.h"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include <nlohmann/json.hpp>
#include "lightconv/error.h"
#include "lightconv/parallel.h"
#include "lightconv/train.h"

namespace lightconv {

ConfusionMatrix Confusion(std::span<const int> predictions,
                          std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    throw InvalidArgumentError("predictions and labels differ in length");
  }
  if (predictions.empty()) throw InvalidArgumentError("no predictions to score");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted_pd = predictions[i] == 1;
    const bool is_pd = labels[i] == 1;
    if (predicted_pd && is_pd) {
      ++cm.tp;
    } else if (predicted_pd) {
      ++cm.fp;
    } else if (is_pd) {
      ++cm.fn;
    } else {
      ++cm.tn;
    }
  }
  return cm;
}

ScalarMetrics ComputeScalarMetrics(const ConfusionMatrix& cm) {
  if (cm.total() <= 0) throw InvalidArgumentError("confusion matrix is empty");
  ScalarMetrics m;
  auto ratio = [](std::int64_t num, std::int64_t den, bool& undefined) {
    if (den == 0) {
      undefined = true;
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  m.precision = ratio(cm.tp, cm.tp + cm.fp, m.precision_undefined);
  m.recall = ratio(cm.tp, cm.tp + cm.fn, m.recall_undefined);
  if (m.precision + m.recall > 0.0) {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  } else {
    m.f1_undefined = true;
  }
  m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  return m;
}

double RocAuc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw InvalidArgumentError("scores and labels differ in length");
  }
  std::int64_t positives = 0, negatives = 0;
  for (int l : labels) (l == 1 ? positives : negatives) += 1;
  if (positives == 0 || negatives == 0) {
    throw InvalidArgumentError("AUC is undefined when only one class is present");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  // Integer counts keep the area exact until the final division.
  double area2 = 0.0;  // twice the un-normalized area
  std::int64_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::int64_t dtp = 0, dfp = 0;
    const double threshold = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == threshold; ++i) {
      (labels[order[i]] == 1 ? dtp : dfp) += 1;
    }
    area2 += static_cast<double>(dfp) * static_cast<double>(2 * tp + dtp);
    tp += dtp;
    fp += dfp;
  }
  return area2 / (2.0 * static_cast<double>(positives) *
                  static_cast<double>(negatives));
}

MetricsReport Evaluate(const ModelParams& checkpoint, std::span<const Epoch> epochs) {
  if (epochs.empty()) throw InvalidArgumentError("no epochs to evaluate");
  std::vector<int> predictions(epochs.size()), labels(epochs.size());
  std::vector<double> scores(epochs.size());
  ParallelFor(epochs.size(), [&](std::size_t i) {
    const ForwardCache cache = Forward(checkpoint, epochs[i].data, Mode::kEval);
    predictions[i] = PredictClass(cache.probs);
    scores[i] = cache.probs.size() > 1 ? cache.probs[1] : 0.0;
    labels[i] = ToIndex(epochs[i].label);
  });

  MetricsReport report;
  report.confusion = Confusion(predictions, labels);
  report.n_epochs = static_cast<std::int64_t>(epochs.size());
  const ScalarMetrics m = ComputeScalarMetrics(report.confusion);
  report.precision = m.precision;
  report.recall = m.recall;
  report.f1 = m.f1;
  report.accuracy = m.accuracy;
  if (m.precision_undefined) report.warnings.push_back("precision undefined (0/0)");
  if (m.recall_undefined) report.warnings.push_back("recall undefined (0/0)");
  if (m.f1_undefined) report.warnings.push_back("f1 undefined (0/0)");
  try {
    report.auc = RocAuc(scores, labels);
  } catch (const InvalidArgumentError&) {
    report.warnings.push_back("auc undefined: single-class evaluation set");
  }
  return report;
}

std::string MetricsToJson(const MetricsReport& r) {
  nlohmann::json doc;
  doc["precision"] = r.precision;
  doc["recall"] = r.recall;
  doc["f1"] = r.f1;
  doc["accuracy"] = r.accuracy;
  doc["auc"] = r.auc ? nlohmann::json(*r.auc) : nlohmann::json(nullptr);
  doc["confusion"] = {{"tp", r.confusion.tp},
                      {"fp", r.confusion.fp},
                      {"tn", r.confusion.tn},
                      {"fn", r.confusion.fn}};
  doc["n_epochs"] = r.n_epochs;
  doc["warnings"] = r.warnings;
  return doc.dump(2) + "\n";
}

std::string MetricsCsvHeader() { return "precision,recall,f1,auc,accuracy"; }

std::string MetricsCsvRow(const MetricsReport& r) {
  char buf[128];
  char auc[16];
  if (r.auc) {
    std::snprintf(auc, sizeof(auc), "%.3f", *r.auc);
  } else {
    std::snprintf(auc, sizeof(auc), "nan");
  }
  std::snprintf(buf, sizeof(buf), "%.1f,%.1f,%.2f,%s,%.1f", 100.0 * r.precision,
                100.0 * r.recall, r.f1, auc, 100.0 * r.accuracy);
  return buf;
}

}  // namespace lightconv
