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

#include "lightconv/train.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string>

#include <nlohmann/json.hpp>
#include "format.h"
#include "lightconv/error.h"
#include "lightconv/parallel.h"
#include "lightconv/random.h"

namespace lightconv {
namespace {

// Stream identifiers for DeriveSeed.
constexpr std::uint64_t kShuffleStream = 1;
constexpr std::uint64_t kDropoutStream = 2;

using internal::ShortestRepr;

void CheckEpochShape(const Epoch& epoch, const ModelConfig& config) {
  if (epoch.data.rows() != static_cast<std::size_t>(config.in_channels)) {
    throw InvalidArgumentError("epoch from subject '" + epoch.subject_id + "' has " +
                               std::to_string(epoch.data.rows()) +
                               " channels, model expects " +
                               std::to_string(config.in_channels));
  }
}

}  // namespace

void TrainConfig::Validate() const {
  if (batch_size < 1) throw InvalidArgumentError("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw InvalidArgumentError("learning_rate must be > 0");
  if (epochs < 1) throw InvalidArgumentError("epochs must be >= 1");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw InvalidArgumentError("Adam betas must be in [0, 1)");
  }
  if (!(adam_eps > 0.0)) throw InvalidArgumentError("adam_eps must be > 0");
}

AdamState AdamState::ZerosLike(const ModelParams& params) {
  return {ModelParams::Zeros(params.config), ModelParams::Zeros(params.config), 0};
}

LossAndGrad CrossEntropy(std::span<const double> probs, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= probs.size()) {
    throw InvalidArgumentError("label " + std::to_string(label) +
                               " out of range for " + std::to_string(probs.size()) +
                               " classes");
  }
  LossAndGrad out;
  out.loss = -std::log(probs[label]);
  out.grad_logits.assign(probs.begin(), probs.end());
  out.grad_logits[label] -= 1.0;
  return out;
}

int PredictClass(std::span<const double> probs) {
  int best = 0;
  for (std::size_t c = 1; c < probs.size(); ++c) {
    if (probs[c] > probs[best]) best = static_cast<int>(c);
  }
  return best;
}

void AdamStep(AdamState& state, ModelParams& params, const Gradients& grads,
              const TrainConfig& config) {
  if (!(grads.config == params.config) || !(state.m.config == params.config)) {
    throw InvalidArgumentError("gradient/optimizer shapes do not match parameters");
  }
  ForEachBlock(grads, [](std::string_view name, std::span<const double> g) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!std::isfinite(g[i])) {
        throw NumericError("non-finite gradient in " + std::string(name) +
                           " at index " + std::to_string(i));
      }
    }
  });

  state.t += 1;
  const double b1 = config.adam_beta1, b2 = config.adam_beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(state.t));

  auto update = [&](std::span<double> theta, std::span<double> m,
                    std::span<double> v, std::span<const double> g) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      theta[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.adam_eps);
    }
  };
  update(params.conv_weight, state.m.conv_weight, state.v.conv_weight,
         grads.conv_weight);
  update(params.conv_bias, state.m.conv_bias, state.v.conv_bias, grads.conv_bias);
  update(params.fc_weight, state.m.fc_weight, state.v.fc_weight, grads.fc_weight);
  update(params.fc_bias, state.m.fc_bias, state.v.fc_bias, grads.fc_bias);
}

EvalSummary EvaluateLoss(const ModelParams& params, std::span<const Epoch> epochs) {
  if (epochs.empty()) throw InvalidArgumentError("no epochs to evaluate");
  std::vector<double> losses(epochs.size());
  std::vector<int> correct(epochs.size());
  ParallelFor(epochs.size(), [&](std::size_t i) {
    CheckEpochShape(epochs[i], params.config);
    const ForwardCache cache = Forward(params, epochs[i].data, Mode::kEval);
    const int label = ToIndex(epochs[i].label);
    losses[i] = CrossEntropy(cache.probs, label).loss;
    correct[i] = PredictClass(cache.probs) == label;
  });
  EvalSummary s;
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    s.loss += losses[i];
    s.accuracy += correct[i];
  }
  s.loss /= static_cast<double>(epochs.size());
  s.accuracy /= static_cast<double>(epochs.size());
  return s;
}

TrainHistory Train(const DatasetSplit& data, const TrainConfig& config,
                   const ModelConfig& model_config, const EpochCallback& on_epoch) {
  config.Validate();
  model_config.Validate();
  if (data.train.empty()) throw InvalidArgumentError("training partition is empty");
  if (data.validation.empty()) {
    throw InvalidArgumentError("validation partition is empty");
  }
  for (const auto& e : data.train) CheckEpochShape(e, model_config);

  ModelParams params = InitParams(config.seed, model_config);
  AdamState adam = AdamState::ZerosLike(params);
  TrainHistory history;
  double best_accuracy = -1.0;
  double best_loss = 0.0;

  const std::size_t n = data.train.size();
  std::vector<std::size_t> order(n);
  for (int pass = 1; pass <= config.epochs; ++pass) {
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(DeriveSeed(config.seed, {kShuffleStream,
                                             static_cast<std::uint64_t>(pass)}));
    shuffle_rng.Shuffle(std::span(order));

    double loss_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < n; start += config.batch_size, ++batch_index) {
      const std::size_t count = std::min<std::size_t>(config.batch_size, n - start);
      std::vector<double> losses(count);
      std::vector<Gradients> item_grads(count);
      ParallelFor(count, [&](std::size_t j) {
        const Epoch& sample = data.train[order[start + j]];
        Rng dropout_rng(DeriveSeed(config.seed,
                                   {kDropoutStream, static_cast<std::uint64_t>(pass),
                                    batch_index, j}));
        const ForwardCache cache = Forward(params, sample.data, Mode::kTrain,
                                           &dropout_rng);
        const LossAndGrad lg = CrossEntropy(cache.probs, ToIndex(sample.label));
        losses[j] = lg.loss;
        item_grads[j] = Backward(cache, params, lg.grad_logits);
      });

      Gradients mean = std::move(item_grads[0]);
      for (std::size_t j = 1; j < count; ++j) {
        const Gradients& g = item_grads[j];
        auto add = [](std::vector<double>& dst, const std::vector<double>& src) {
          for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
        };
        add(mean.conv_weight, g.conv_weight);
        add(mean.conv_bias, g.conv_bias);
        add(mean.fc_weight, g.fc_weight);
        add(mean.fc_bias, g.fc_bias);
      }
      const double inv = 1.0 / static_cast<double>(count);
      ForEachBlock(mean, [inv](std::string_view, std::span<double> values) {
        for (double& v : values) v *= inv;
      });

      double batch_loss = 0.0;
      for (double l : losses) batch_loss += l;
      if (!std::isfinite(batch_loss)) {
        throw NumericError("training diverged: non-finite loss at epoch " +
                           std::to_string(pass) + ", batch " +
                           std::to_string(batch_index + 1));
      }
      loss_sum += batch_loss;
      AdamStep(adam, params, mean, config);
    }

    const EvalSummary val = EvaluateLoss(params, data.validation);
    if (!std::isfinite(val.loss)) {
      throw NumericError("training diverged: non-finite validation loss at epoch " +
                         std::to_string(pass));
    }
    EpochRecord record{pass, loss_sum / static_cast<double>(n), val.loss,
                       val.accuracy};
    history.epochs.push_back(record);
    if (val.accuracy > best_accuracy ||
        (val.accuracy == best_accuracy && val.loss < best_loss)) {
      best_accuracy = val.accuracy;
      best_loss = val.loss;
      history.best_epoch = pass;
      history.best_checkpoint = params;
    }
    if (on_epoch) on_epoch(record);
  }
  return history;
}

std::string FormatLogLine(const EpochRecord& r) {
  return "epoch," + std::to_string(r.epoch) + ",train_loss," +
         ShortestRepr(r.train_loss) + ",val_loss," + ShortestRepr(r.val_loss) +
         ",val_acc," + ShortestRepr(r.val_accuracy);
}

std::string HistoryToJson(const TrainHistory& history, const TrainConfig& config,
                          const ModelConfig& model_config) {
  nlohmann::json doc;
  doc["best_epoch"] = history.best_epoch;
  doc["train_config"] = {{"batch_size", config.batch_size},
                         {"learning_rate", config.learning_rate},
                         {"epochs", config.epochs},
                         {"adam_beta1", config.adam_beta1},
                         {"adam_beta2", config.adam_beta2},
                         {"adam_eps", config.adam_eps},
                         {"seed", config.seed}};
  doc["model_config"] = {{"in_channels", model_config.in_channels},
                         {"out_channels", model_config.out_channels},
                         {"kernel", model_config.kernel},
                         {"classes", model_config.classes},
                         {"dropout_rate", model_config.dropout_rate}};
  doc["epochs"] = nlohmann::json::array();
  for (const auto& r : history.epochs) {
    doc["epochs"].push_back({{"epoch", r.epoch},
                             {"train_loss", r.train_loss},
                             {"val_loss", r.val_loss},
                             {"val_accuracy", r.val_accuracy}});
  }
  return doc.dump(2) + "\n";
}

double FiniteDiffCheck(const ModelParams& params, const Epoch& epoch, double eps) {
  if (!(eps > 0.0)) throw InvalidArgumentError("finite-difference step must be > 0");
  if (CountParams(params.config).total() > 10000) {
    throw InvalidArgumentError("finite-difference check is limited to 10^4 parameters");
  }
  params.CheckShapes();
  CheckEpochShape(epoch, params.config);
  const int label = ToIndex(epoch.label);

  const ForwardCache cache = Forward(params, epoch.data, Mode::kEval);
  const Gradients analytic =
      Backward(cache, params, CrossEntropy(cache.probs, label).grad_logits);

  auto loss_at = [&](const ModelParams& p) {
    return CrossEntropy(Forward(p, epoch.data, Mode::kEval).probs, label).loss;
  };

  ModelParams probe = params;
  double worst = 0.0;
  auto check_block = [&](std::vector<double>& values,
                         const std::vector<double>& grad) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + eps;
      const double up = loss_at(probe);
      values[i] = saved - eps;
      const double down = loss_at(probe);
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double denom =
          std::max({std::abs(grad[i]), std::abs(numeric), kFiniteDiffFloor});
      worst = std::max(worst, std::abs(grad[i] - numeric) / denom);
    }
  };
  check_block(probe.conv_weight, analytic.conv_weight);
  check_block(probe.conv_bias, analytic.conv_bias);
  check_block(probe.fc_weight, analytic.fc_weight);
  check_block(probe.fc_bias, analytic.fc_bias);
  return worst;
}

}  // namespace lightconv
