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

#include "lightconv/model.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "conv_kernels.h"
#include "lightconv/error.h"

namespace lightconv {

void ModelConfig::Validate() const {
  if (in_channels < 1 || out_channels < 1 || classes < 1 || kernel < 1) {
    throw InvalidArgumentError("model dimensions must be positive");
  }
  if (kernel % 2 == 0) {
    throw InvalidArgumentError("kernel size must be odd for symmetric same "
                               "padding, got " + std::to_string(kernel));
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw InvalidArgumentError("dropout rate must be in [0, 1)");
  }
}

ModelParams ModelParams::Zeros(const ModelConfig& config) {
  config.Validate();
  ModelParams p;
  p.config = config;
  p.conv_weight.assign(static_cast<std::size_t>(config.out_channels) *
                           config.in_channels * config.kernel, 0.0);
  p.conv_bias.assign(config.out_channels, 0.0);
  p.fc_weight.assign(static_cast<std::size_t>(config.classes) * config.out_channels,
                     0.0);
  p.fc_bias.assign(config.classes, 0.0);
  return p;
}

void ModelParams::CheckShapes() const {
  config.Validate();
  const auto& c = config;
  if (conv_weight.size() != static_cast<std::size_t>(c.out_channels) *
                                c.in_channels * c.kernel ||
      conv_bias.size() != static_cast<std::size_t>(c.out_channels) ||
      fc_weight.size() != static_cast<std::size_t>(c.classes) * c.out_channels ||
      fc_bias.size() != static_cast<std::size_t>(c.classes)) {
    throw InvalidArgumentError("parameter arrays do not match model config");
  }
}

ParamCount CountParams(const ModelConfig& config) {
  const std::int64_t in = config.in_channels, out = config.out_channels;
  const std::int64_t k = config.kernel, classes = config.classes;
  return {out * in * k + out, classes * out + classes};
}

ModelParams InitParams(std::uint64_t seed, const ModelConfig& config) {
  ModelParams p = ModelParams::Zeros(config);
  Rng rng(seed);
  const double conv_scale =
      1.0 / std::sqrt(static_cast<double>(config.in_channels) * config.kernel);
  for (double& w : p.conv_weight) w = rng.Uniform(-conv_scale, conv_scale);
  const double fc_scale = 1.0 / std::sqrt(static_cast<double>(config.out_channels));
  for (double& w : p.fc_weight) w = rng.Uniform(-fc_scale, fc_scale);
  return p;
}

Array2D Conv1dSame(const ModelParams& params, const Array2D& x) {
  params.CheckShapes();
  const auto& c = params.config;
  if (x.rows() != static_cast<std::size_t>(c.in_channels)) {
    throw InvalidArgumentError("input has " + std::to_string(x.rows()) +
                               " channels, model expects " +
                               std::to_string(c.in_channels));
  }
  if (x.cols() == 0) throw InvalidArgumentError("input has no samples");
  Array2D y;
  internal::ConvForward(params.conv_weight, c.out_channels, c.in_channels, c.kernel,
                        x, y);
  for (int o = 0; o < c.out_channels; ++o) {
    const double b = params.conv_bias[o];
    for (double& v : y.row(o)) v += b;
  }
  return y;
}

std::vector<double> Softmax(std::span<const double> logits) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> probs(logits.size());
  double total = 0.0;
  for (std::size_t c = 0; c < logits.size(); ++c) {
    probs[c] = std::exp(logits[c] - peak);
    total += probs[c];
  }
  for (double& p : probs) p /= total;
  return probs;
}

namespace {

std::vector<double> Classify(const ModelParams& params,
                             std::span<const double> pooled) {
  const auto& c = params.config;
  std::vector<double> logits(c.classes);
  for (int k = 0; k < c.classes; ++k) {
    double z = params.fc_bias[k];
    for (int o = 0; o < c.out_channels; ++o) z += params.fc_w(k, o) * pooled[o];
    logits[k] = z;
  }
  return logits;
}

void RequireFinite(const Array2D& x) {
  if (!x.AllFinite()) throw NumericError("model input contains non-finite values");
}

}  // namespace

ForwardCache Forward(const ModelParams& params, const Array2D& x, Mode mode,
                     Rng* rng) {
  RequireFinite(x);
  if (mode == Mode::kTrain && rng == nullptr) {
    throw InvalidArgumentError("train-mode forward needs a random source");
  }
  const auto& c = params.config;
  ForwardCache cache;
  cache.mode = mode;
  cache.input = x;
  cache.conv_pre_act = Conv1dSame(params, x);

  const std::size_t len = x.cols();
  cache.relu_mask = Array2D(c.out_channels, len);
  cache.dropout_mask = Array2D(c.out_channels, len, 1.0);
  cache.pooled.assign(c.out_channels, 0.0);
  const double keep_scale = 1.0 / (1.0 - c.dropout_rate);
  const bool drop = mode == Mode::kTrain && c.dropout_rate > 0.0;

  for (int o = 0; o < c.out_channels; ++o) {
    const auto pre = cache.conv_pre_act.row(o);
    auto relu = cache.relu_mask.row(o);
    auto dmask = cache.dropout_mask.row(o);
    if (drop) {
      for (double& m : dmask) m = rng->Uniform01() < c.dropout_rate ? 0.0 : keep_scale;
    }
    for (std::size_t t = 0; t < len; ++t) relu[t] = pre[t] > 0.0 ? 1.0 : 0.0;
    // Deviations from the first activation are summed so that a constant
    // channel pools to exactly that constant.
    const double ref = std::max(pre[0], 0.0) * dmask[0];
    double sum = 0.0;
    for (std::size_t t = 0; t < len; ++t) sum += std::max(pre[t], 0.0) * dmask[t] - ref;
    cache.pooled[o] = ref + sum / static_cast<double>(len);
  }
  cache.logits = Classify(params, cache.pooled);
  cache.probs = Softmax(cache.logits);
  return cache;
}

std::vector<double> PooledFeatures(const ModelParams& params, const Array2D& x) {
  RequireFinite(x);
  const Array2D pre = Conv1dSame(params, x);
  std::vector<double> pooled(pre.rows());
  for (std::size_t o = 0; o < pre.rows(); ++o) {
    const auto row = pre.row(o);
    const double ref = std::max(row[0], 0.0);
    double sum = 0.0;
    for (double v : row) sum += std::max(v, 0.0) - ref;
    pooled[o] = ref + sum / static_cast<double>(row.size());
  }
  return pooled;
}

Gradients Backward(const ForwardCache& cache, const ModelParams& params,
                   std::span<const double> grad_logits) {
  params.CheckShapes();
  const auto& c = params.config;
  const std::size_t len = cache.input.cols();
  if (grad_logits.size() != static_cast<std::size_t>(c.classes) ||
      cache.pooled.size() != static_cast<std::size_t>(c.out_channels) ||
      cache.input.rows() != static_cast<std::size_t>(c.in_channels) ||
      cache.conv_pre_act.rows() != static_cast<std::size_t>(c.out_channels) ||
      cache.conv_pre_act.cols() != len) {
    throw InvalidArgumentError("forward cache does not match model parameters");
  }

  Gradients grads = ModelParams::Zeros(c);
  std::vector<double> grad_pooled(c.out_channels, 0.0);
  for (int k = 0; k < c.classes; ++k) {
    grads.fc_bias[k] = grad_logits[k];
    for (int o = 0; o < c.out_channels; ++o) {
      grads.fc_w(k, o) = grad_logits[k] * cache.pooled[o];
      grad_pooled[o] += grad_logits[k] * params.fc_w(k, o);
    }
  }

  // Upstream gradient at the convolution output.
  Array2D grad_pre(c.out_channels, len);
  const double inv_len = 1.0 / static_cast<double>(len);
  for (int o = 0; o < c.out_channels; ++o) {
    const double scale = grad_pooled[o] * inv_len;
    const auto relu = cache.relu_mask.row(o);
    const auto dmask = cache.dropout_mask.row(o);
    auto g = grad_pre.row(o);
    double bias_grad = 0.0;
    for (std::size_t t = 0; t < len; ++t) {
      g[t] = scale * relu[t] * dmask[t];
      bias_grad += g[t];
    }
    grads.conv_bias[o] = bias_grad;
  }
  internal::ConvWeightGrad(grad_pre, cache.input, c.kernel, grads.conv_weight);
  return grads;
}

}  // namespace lightconv
