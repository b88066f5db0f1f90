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

// Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "lightconv/checkpoint.h"
#include "lightconv/interpret.h"
#include "lightconv/metrics.h"
#include "lightconv/model.h"
#include "lightconv/pipeline.h"
#include "lightconv/preprocess.h"
#include "lightconv/random.h"
#include "lightconv/runtime.h"
#include "lightconv/synthetic.h"
#include "lightconv/train.h"

namespace lightconv {
namespace {

using Clock = std::chrono::steady_clock;
constexpr double kPi = std::numbers::pi;

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kFail;
  std::string detail;
};

Outcome Check(bool ok, std::string detail) {
  return {ok ? Status::kPass : Status::kFail, std::move(detail)};
}

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

// Runs one criterion; a criterion that overruns its time limit fails.
bool Run(const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome = {Status::kFail, std::string("exception: ") + e.what()};
  }
  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  if (outcome.status == Status::kPass && limit_s > 0 && elapsed > limit_s) {
    outcome.status = Status::kFail;
    outcome.detail += "; over time limit";
  }
  const char* label = outcome.status == Status::kPass   ? "PASS"
                      : outcome.status == Status::kSkip ? "SKIP"
                                                        : "FAIL";
  if (limit_s > 0) {
    std::printf("%s %-28s %8.2f s (limit %g s)  %s\n", label, name, elapsed, limit_s,
                outcome.detail.c_str());
  } else {
    std::printf("%s %-28s %8.2f s  %s\n", label, name, elapsed, outcome.detail.c_str());
  }
  std::fflush(stdout);
  return outcome.status != Status::kFail;
}

Outcome ArchitectureConformance() {
  const ModelConfig config;
  const ParamCount count = CountParams(config);
  const ModelParams params = InitParams(0, config);
  const ForwardCache cache = Forward(params, Array2D(59, 2500, 0.5), Mode::kEval);
  const bool shapes = cache.input.rows() == 59 && cache.input.cols() == 2500 &&
                      cache.conv_pre_act.rows() == 59 && cache.conv_pre_act.cols() == 2500 &&
                      cache.pooled.size() == 59 && cache.logits.size() == 2 &&
                      cache.probs.size() == 2;
  return Check(count.conv == 38350 && count.fc == 120 && shapes,
               "conv=" + std::to_string(count.conv) + " fc=" + std::to_string(count.fc) +
                   (shapes ? " shapes (59,2500)->(59,2500)->(59,1)->(2,1)" : " shape mismatch"));
}

Outcome GradientCorrectness() {
  Rng rng(2026);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const ModelConfig config{1 + static_cast<int>(rng.Index(4)),
                             1 + static_cast<int>(rng.Index(4)),
                             3 + 2 * static_cast<int>(rng.Index(3)), 2};
    const ModelParams params = InitParams(static_cast<std::uint64_t>(trial), config);
    Epoch epoch;
    epoch.data = Array2D(config.in_channels, 6 + rng.Index(20));
    for (double& v : epoch.data.values()) v = rng.Normal();
    epoch.label = trial % 2 ? ClassLabel::kPd : ClassLabel::kControl;
    worst = std::max(worst, FiniteDiffCheck(params, epoch, 1e-5));
  }
  return Check(worst < 1e-6, Fmt("max relative error %.3g over 20 configurations", worst));
}

DatasetSplit SyntheticDataset() {
  const SyntheticSpec spec;
  PrepareOptions options;
  options.epoch_seconds = spec.epoch_seconds;
  options.seed = spec.seed;
  std::vector<SubjectRecording> subjects = MakeSyntheticSubjects(spec);
  for (SubjectRecording& s : subjects) s = FilterRecording(s, options);
  return SplitDataset(subjects, options.ratios, options.seed, options.epoch_seconds);
}

struct SyntheticRun {
  std::string checkpoint;
  std::string history;
};

std::optional<SyntheticRun> first_run;

Outcome SyntheticEndToEnd() {
  const DatasetSplit data = SyntheticDataset();
  const TrainConfig train;
  const ModelConfig model;
  const TrainHistory history = Train(data, train, model);
  first_run = SyntheticRun{EncodeCheckpoint(history.best_checkpoint, train.seed),
                           HistoryToJson(history, train, model)};
  const MetricsReport report = Evaluate(history.best_checkpoint, data.test);
  const double auc = report.auc.value_or(std::nan(""));
  return Check(report.accuracy >= 0.95 && auc >= 0.98,
               Fmt("test accuracy %.1f%%, AUC %.4f, %g test epochs", 100.0 * report.accuracy,
                   auc, static_cast<double>(report.n_epochs)));
}

Outcome Determinism() {
  if (!first_run) return {Status::kFail, "first synthetic run did not complete"};
  const DatasetSplit data = SyntheticDataset();
  const TrainConfig train;
  const ModelConfig model;
  const TrainHistory history = Train(data, train, model);
  const bool same_ckpt =
      EncodeCheckpoint(history.best_checkpoint, train.seed) == first_run->checkpoint;
  const bool same_hist = HistoryToJson(history, train, model) == first_run->history;
  return Check(same_ckpt && same_hist,
               std::string("checkpoint ") + (same_ckpt ? "identical" : "differs") +
                   ", history " + (same_hist ? "identical" : "differs"));
}

Outcome ProbeOracle() {
  // Ten output channels, each with its own random kernel.
  constexpr int kKernels = 10;
  ModelParams params = ModelParams::Zeros({1, kKernels, 11, 2});
  Rng rng(17);
  for (double& w : params.conv_weight) w = rng.Normal();
  ProbeSpec spec;
  spec.channels = 1;
  spec.repeats_noise = 300;
  spec.seed = 5;
  const FilterResponseMap map = ConvFilterResponse(params, spec);
  double worst = 0.0;
  for (int o = 0; o < kKernels; ++o) {
    const PsdEstimate& psd = map.channels[static_cast<std::size_t>(o)];
    double err2 = 0.0, ref2 = 0.0;
    for (std::size_t k = 1; k + 1 < psd.freqs.size(); ++k) {
      std::complex<double> h = 0.0;
      for (int j = 0; j < params.config.kernel; ++j) {
        h += params.conv_w(o, 0, j) * std::polar(1.0, -2.0 * kPi * psd.freqs[k] * j / spec.fs);
      }
      // One-sided density of unit-variance white noise is 2 / fs.
      const double ref = std::norm(h) * 2.0 / spec.fs;
      err2 += (psd.power[k] - ref) * (psd.power[k] - ref);
      ref2 += ref * ref;
    }
    worst = std::max(worst, std::sqrt(err2 / ref2));
  }
  return Check(worst < 0.10, Fmt("worst relative RMS %.4f over 10 kernels", worst));
}

Outcome PoolingSensitivityIdentity() {
  const ModelConfig config;
  ModelParams params = ModelParams::Zeros(config);
  for (int o = 0; o < config.out_channels; ++o) params.conv_w(o, o, (config.kernel - 1) / 2) = 1.0;
  ProbeSpec spec;
  spec.frequencies.clear();
  for (int f = 5; f <= 245; ++f) spec.frequencies.push_back(f);
  spec.seed = 3;
  const SensitivityMap map = PoolingSensitivity(params, spec);
  double worst = 0.0;
  for (double v : map.activation.values()) worst = std::max(worst, std::abs(v - 1.0 / kPi));
  return Check(worst <= 0.02, Fmt("max |s - 1/pi| = %.5f over 59 channels x 241 frequencies",
                                  worst));
}

double PairCountAuc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double credit = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1.0;
      credit += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
    }
  }
  return credit / pairs;
}

Outcome AucOracle() {
  Rng rng(99);
  double worst = 0.0;
  long cases = 0;
  for (std::size_t n = 2; n <= 12; ++n) {
    for (int draw = 0; draw < 8; ++draw) {
      // Few distinct levels, so ties are common.
      const std::size_t levels = draw % 2 ? 3 : n;
      std::vector<double> scores(n);
      for (double& s : scores) s = static_cast<double>(rng.Index(levels)) / levels;
      for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = (mask >> i) & 1u;
        worst = std::max(worst, std::abs(RocAuc(scores, labels) - PairCountAuc(scores, labels)));
        ++cases;
      }
    }
  }
  return Check(worst < 1e-12, Fmt("%g labelings, max difference %.3g",
                                  static_cast<double>(cases), worst));
}

Outcome FilterConformance() {
  constexpr double kFs = 500.0;
  const FilterCoeffs coeffs = DesignHighpass(1.0, 4, kFs);
  const double dc_db = 20.0 * std::log10(std::norm(FrequencyResponse(coeffs, 0.0)) + 1e-300);
  const double ten_db = 20.0 * std::log10(std::norm(FrequencyResponse(coeffs, 10.0)));

  // Measured on signals: a constant and a 10 Hz sine, each 30 s long.
  const std::size_t n = 15000;
  std::vector<double> dc(n, 1.0), sine(n);
  for (std::size_t t = 0; t < n; ++t) sine[t] = std::sin(2.0 * kPi * 10.0 * t / kFs);
  const auto dc_out = ApplyZeroPhase(coeffs, dc);
  const auto sine_out = ApplyZeroPhase(coeffs, sine);
  double dc_peak = 0.0, xy = 0.0, xx = 0.0, yy = 0.0, xq = 0.0;
  for (std::size_t t = n / 4; t < 3 * n / 4; ++t) {
    dc_peak = std::max(dc_peak, std::abs(dc_out[t]));
    const double q = std::cos(2.0 * kPi * 10.0 * t / kFs);
    xy += sine[t] * sine_out[t];
    xq += q * sine_out[t];
    xx += sine[t] * sine[t];
    yy += sine_out[t] * sine_out[t];
  }
  const double dc_measured_db = 20.0 * std::log10(dc_peak + 1e-300);
  const double ten_measured_db = 10.0 * std::log10(yy / xx);
  const double phase_deg = std::atan2(xq, xy) * 180.0 / kPi;
  const bool ok = dc_db < -40.0 && dc_measured_db < -40.0 && std::abs(ten_db) <= 0.5 &&
                  std::abs(ten_measured_db) <= 0.5 && std::abs(phase_deg) < 0.1;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "DC %.1f dB (measured %.1f dB), 10 Hz %+.2e dB (measured %+.2e dB), "
                "phase %.2e deg",
                dc_db, dc_measured_db, ten_db, ten_measured_db, phase_deg);
  return Check(ok, buf);
}

Outcome RealDataReplication() {
  const char* manifest_path = std::getenv("LIGHTCONV_REAL_MANIFEST");
  if (manifest_path == nullptr || *manifest_path == '\0') {
    return {Status::kSkip, "set LIGHTCONV_REAL_MANIFEST to a dataset manifest to run"};
  }
  const Manifest manifest = LoadManifest(manifest_path);
  const PrepareOptions options;
  const DatasetSplit data = PrepareDataset(manifest, options);
  const TrainConfig train;
  ModelConfig model;
  model.in_channels = static_cast<int>(data.train.front().data.rows());
  const TrainHistory history = Train(data, train, model);
  const MetricsReport report = Evaluate(history.best_checkpoint, data.test);
  const double auc = report.auc.value_or(std::nan(""));
  return Check(report.accuracy >= 0.90 && auc >= 0.95,
               Fmt("test accuracy %.1f%%, AUC %.4f", 100.0 * report.accuracy, auc));
}

}  // namespace
}  // namespace lightconv

int main() {
  using namespace lightconv;
  TuneProcessAllocator();
  bool ok = true;
  ok &= Run("architecture_conformance", 1, ArchitectureConformance);
  ok &= Run("gradient_correctness", 30, GradientCorrectness);
  ok &= Run("synthetic_end_to_end", 300, SyntheticEndToEnd);
  ok &= Run("probe_oracle", 120, ProbeOracle);
  ok &= Run("pooling_sensitivity", 60, PoolingSensitivityIdentity);
  ok &= Run("auc_oracle", 60, AucOracle);
  ok &= Run("filter_conformance", 0, FilterConformance);
  ok &= Run("determinism", 0, Determinism);
  ok &= Run("real_data_replication", 1800, RealDataReplication);
  std::printf("%s\n", ok ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED");
  return ok ? 0 : 1;
}
