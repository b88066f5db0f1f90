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

#ifndef LIGHTCONV_TRAIN_H_
#define LIGHTCONV_TRAIN_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lightconv/model.h"
#include "lightconv/signal_io.h"

namespace lightconv {

struct TrainConfig {
  int batch_size = 2;
  double learning_rate = 1e-4;
  int epochs = 80;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;

  void Validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct AdamState {
  ModelParams m;
  ModelParams v;
  std::int64_t t = 0;

  static AdamState ZerosLike(const ModelParams& params);
};

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad_logits;  // probs - onehot(label)
};

// Softmax cross-entropy: loss = -ln(probs[label]).
LossAndGrad CrossEntropy(std::span<const double> probs, int label);

// Predicted class: argmax of probs, ties resolved toward the lower index
// (Control).
int PredictClass(std::span<const double> probs);

// One bias-corrected Adam update of every parameter block. Throws
// NumericError naming the block if any gradient is non-finite.
void AdamStep(AdamState& state, ModelParams& params, const Gradients& grads,
              const TrainConfig& config);

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;

  bool operator==(const EpochRecord&) const = default;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;  // 1-based index into epochs
  ModelParams best_checkpoint;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Mini-batch training with Adam. Each pass shuffles the training epochs,
// averages gradients over each batch (the last batch may be smaller) and
// evaluates the validation partition in eval mode afterwards. The retained
// checkpoint has the highest validation accuracy; ties go to the lower
// validation loss, then to the earlier pass. All randomness derives from
// config.seed, and per-item dropout streams are keyed by (pass, batch, item)
// so results do not depend on the thread count.
TrainHistory Train(const DatasetSplit& data, const TrainConfig& config,
                   const ModelConfig& model_config,
                   const EpochCallback& on_epoch = {});

// Mean loss and accuracy of eval-mode predictions.
struct EvalSummary {
  double loss = 0.0;
  double accuracy = 0.0;
};
EvalSummary EvaluateLoss(const ModelParams& params, std::span<const Epoch> epochs);

// "epoch,<n>,train_loss,<v>,val_loss,<v>,val_acc,<v>"
std::string FormatLogLine(const EpochRecord& record);

std::string HistoryToJson(const TrainHistory& history, const TrainConfig& config,
                          const ModelConfig& model_config);

// Largest relative difference between the analytic gradient and central
// differences of the eval-mode cross-entropy, over every parameter. The
// relative error of an entry is |analytic - numeric| / max(|analytic|,
// |numeric|, kFiniteDiffFloor).
inline constexpr double kFiniteDiffFloor = 1e-3;
double FiniteDiffCheck(const ModelParams& params, const Epoch& epoch, double eps);

}  // namespace lightconv

#endif  // LIGHTCONV_TRAIN_H_
