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

#include "lightconv/experiments.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>
#include "lightconv/error.h"
#include "lightconv/parallel.h"
#include "lightconv/preprocess.h"
#include "lightconv/random.h"

namespace lightconv {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::array<double, kMetricNames.size()> MetricValues(const MetricsReport& r) {
  return {r.precision, r.recall, r.f1, r.auc.value_or(kNaN), r.accuracy};
}

}  // namespace

const char* SweepParameterName(SweepParameter p) {
  return p == SweepParameter::kKernelSize ? "kernel_size" : "out_channels";
}

SweepParameter ParseSweepParameter(std::string_view text) {
  if (text == "kernel_size" || text == "kernel") return SweepParameter::kKernelSize;
  if (text == "out_channels" || text == "channels") return SweepParameter::kOutChannels;
  throw ParseError("unknown sweep parameter '" + std::string(text) + "'");
}

SeedPolicy ParseSeedPolicy(std::string_view text) {
  if (text == "fixed") return SeedPolicy::kFixed;
  if (text == "per_value") return SeedPolicy::kPerValue;
  throw ParseError("unknown seed policy '" + std::string(text) + "'");
}

void SweepConfig::Validate() const {
  if (values.empty()) throw InvalidArgumentError("sweep has no values");
  for (int v : values) {
    if (parameter == SweepParameter::kKernelSize && (v < 3 || v % 2 == 0)) {
      throw InvalidArgumentError("kernel sweep values must be odd and >= 3, got " +
                                 std::to_string(v));
    }
    if (parameter == SweepParameter::kOutChannels && v < 1) {
      throw InvalidArgumentError("channel sweep values must be >= 1");
    }
  }
  base_train_config.Validate();
  base_model_config.Validate();
}

std::vector<int> DefaultKernelSweep() {
  std::vector<int> v;
  for (int k = 11; k <= 39; k += 2) v.push_back(k);
  return v;
}

std::vector<int> DefaultChannelSweep() { return {20, 30, 40, 50, 59}; }

ModelConfig SweepModelConfig(const SweepConfig& config, std::size_t index) {
  ModelConfig m = config.base_model_config;
  if (config.parameter == SweepParameter::kKernelSize) {
    m.kernel = config.values.at(index);
  } else {
    m.out_channels = config.values.at(index);
  }
  return m;
}

TrainConfig SweepTrainConfig(const SweepConfig& config, std::size_t index) {
  TrainConfig t = config.base_train_config;
  if (config.seed_policy == SeedPolicy::kPerValue) {
    t.seed = DeriveSeed(t.seed, {static_cast<std::uint64_t>(index)});
  }
  return t;
}

std::vector<double> NormalizeMetric(std::span<const double> values) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    if (std::isnan(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::vector<double> out(values.size(), kNaN);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) continue;
    out[i] = hi > lo ? (values[i] - lo) / (hi - lo) : 1.0;
  }
  return out;
}

AblationReport RunSweep(const SweepConfig& config, const DatasetSplit& data) {
  config.Validate();
  AblationReport report;
  report.parameter = config.parameter;
  report.points.resize(config.values.size());
  ParallelFor(config.values.size(), [&](std::size_t i) {
    SweepPoint& point = report.points[i];
    point.value = config.values[i];
    point.model_config = SweepModelConfig(config, i);
    point.train_config = SweepTrainConfig(config, i);
    try {
      const TrainHistory history =
          Train(data, point.train_config, point.model_config);
      point.metrics = Evaluate(history.best_checkpoint, data.test);
    } catch (const std::exception& e) {
      point.error = e.what();
    }
  });

  for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
    std::vector<double> raw;
    for (const auto& p : report.points) {
      raw.push_back(p.metrics ? MetricValues(*p.metrics)[m] : kNaN);
    }
    report.normalized[m] = NormalizeMetric(raw);
  }
  return report;
}

std::string AblationCsv(const AblationReport& report) {
  std::string out = SweepParameterName(report.parameter);
  for (auto name : kMetricNames) out += "," + std::string(name);
  for (auto name : kMetricNames) out += ",normalized_" + std::string(name);
  out += ",error\n";
  char buf[32];
  for (std::size_t p = 0; p < report.points.size(); ++p) {
    const SweepPoint& point = report.points[p];
    out += std::to_string(point.value);
    std::array<double, kMetricNames.size()> values;
    values.fill(kNaN);
    if (point.metrics) values = MetricValues(*point.metrics);
    for (double v : values) {
      std::snprintf(buf, sizeof(buf), ",%.6f", v);
      out += buf;
    }
    for (const auto& column : report.normalized) {
      std::snprintf(buf, sizeof(buf), ",%.6f", column[p]);
      out += buf;
    }
    std::string error = point.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    out += "," + error + "\n";
  }
  return out;
}

std::string AblationJson(const AblationReport& report) {
  nlohmann::json doc;
  doc["parameter"] = SweepParameterName(report.parameter);
  doc["points"] = nlohmann::json::array();
  for (std::size_t p = 0; p < report.points.size(); ++p) {
    const SweepPoint& point = report.points[p];
    nlohmann::json entry;
    entry["value"] = point.value;
    entry["seed"] = point.train_config.seed;
    if (point.metrics) {
      entry["metrics"] = nlohmann::json::parse(MetricsToJson(*point.metrics));
    } else {
      entry["metrics"] = nullptr;
    }
    nlohmann::json normalized;
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      const double v = report.normalized[m][p];
      normalized[std::string(kMetricNames[m])] =
          std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
    }
    entry["normalized"] = normalized;
    entry["error"] = point.error;
    doc["points"].push_back(entry);
  }
  return doc.dump(2) + "\n";
}

std::vector<double> ChannelAverage(const Array2D& data) {
  std::vector<double> avg(data.cols(), 0.0);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto row = data.row(r);
    for (std::size_t t = 0; t < avg.size(); ++t) avg[t] += row[t];
  }
  const double inv = 1.0 / static_cast<double>(std::max<std::size_t>(1, data.rows()));
  for (double& v : avg) v *= inv;
  return avg;
}

GroupPsdReport ComputeGroupPsd(std::span<const Epoch> epochs, double fs,
                               std::size_t window_len, double overlap) {
  std::vector<PsdEstimate> psds(epochs.size());
  ParallelFor(epochs.size(), [&](std::size_t i) {
    psds[i] = WelchPsd(ChannelAverage(epochs[i].data), fs, window_len, overlap);
  });

  GroupPsdReport report;
  report.control.label = ClassLabel::kControl;
  report.pd.label = ClassLabel::kPd;
  for (GroupPsd* group : {&report.control, &report.pd}) {
    std::vector<const PsdEstimate*> members;
    for (std::size_t i = 0; i < epochs.size(); ++i) {
      if (epochs[i].label == group->label) members.push_back(&psds[i]);
    }
    if (members.empty()) {
      throw InvalidArgumentError(std::string("group PSD needs both classes; no ") +
                                 LabelName(group->label) + " epochs");
    }
    const std::size_t bins = members.front()->power.size();
    group->count = members.size();
    group->mean.assign(bins, 0.0);
    group->sem.assign(bins, 0.0);
    // Accumulating deviations from the first member keeps the mean of
    // identical spectra exact, so their SEM is exactly zero.
    const std::vector<double>& first = members.front()->power;
    for (const auto* psd : members) {
      if (psd->power.size() != bins) {
        throw InvalidArgumentError("group PSD epochs differ in length");
      }
      for (std::size_t k = 0; k < bins; ++k) group->mean[k] += psd->power[k] - first[k];
    }
    const double n = static_cast<double>(members.size());
    for (std::size_t k = 0; k < bins; ++k) group->mean[k] = first[k] + group->mean[k] / n;
    if (members.size() > 1) {
      for (const auto* psd : members) {
        for (std::size_t k = 0; k < bins; ++k) {
          const double d = psd->power[k] - group->mean[k];
          group->sem[k] += d * d;
        }
      }
      for (double& v : group->sem) v = std::sqrt(v / (n - 1.0)) / std::sqrt(n);
    }
    report.freqs = members.front()->freqs;
  }
  return report;
}

void WriteGroupPsdCsv(const std::filesystem::path& path,
                      const GroupPsdReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.precision(17);
  out << "freq,mean_control,sem_control,mean_pd,sem_pd\n";
  for (std::size_t k = 0; k < report.freqs.size(); ++k) {
    out << report.freqs[k] << ',' << report.control.mean[k] << ','
        << report.control.sem[k] << ',' << report.pd.mean[k] << ','
        << report.pd.sem[k] << '\n';
  }
}

}  // namespace lightconv
