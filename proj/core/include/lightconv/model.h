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

#ifndef LIGHTCONV_MODEL_H_
#define LIGHTCONV_MODEL_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lightconv/array2d.h"
#include "lightconv/random.h"

namespace lightconv {

// Architecture: Conv1d (same padding, stride 1) -> ReLU -> dropout ->
// global average pool over time -> fully connected -> softmax.
struct ModelConfig {
  int in_channels = 59;
  int out_channels = 59;
  int kernel = 11;  // must be odd
  int classes = 2;
  double dropout_rate = 0.1;

  void Validate() const;
  bool operator==(const ModelConfig&) const = default;
};

struct ParamCount {
  std::int64_t conv = 0;
  std::int64_t fc = 0;

  std::int64_t total() const { return conv + fc; }
  bool operator==(const ParamCount&) const = default;
};

// The complete learnable state. The same layout is reused for gradients and
// optimizer moments.
struct ModelParams {
  ModelConfig config;
  std::vector<double> conv_weight;  // [out_channels][in_channels][kernel]
  std::vector<double> conv_bias;    // [out_channels]
  std::vector<double> fc_weight;    // [classes][out_channels]
  std::vector<double> fc_bias;      // [classes]

  static ModelParams Zeros(const ModelConfig& config);

  double& conv_w(int o, int i, int k) {
    return conv_weight[(static_cast<std::size_t>(o) * config.in_channels + i) *
                           config.kernel + k];
  }
  double conv_w(int o, int i, int k) const {
    return conv_weight[(static_cast<std::size_t>(o) * config.in_channels + i) *
                           config.kernel + k];
  }
  double& fc_w(int c, int o) {
    return fc_weight[static_cast<std::size_t>(c) * config.out_channels + o];
  }
  double fc_w(int c, int o) const {
    return fc_weight[static_cast<std::size_t>(c) * config.out_channels + o];
  }

  // Throws InvalidArgumentError when array sizes disagree with config.
  void CheckShapes() const;

  bool operator==(const ModelParams&) const = default;
};

using Gradients = ModelParams;

// Visits (name, values) for each parameter block in serialization order.
template <typename Params, typename Fn>
void ForEachBlock(Params& params, Fn&& fn) {
  fn(std::string_view("conv_weight"), std::span(params.conv_weight));
  fn(std::string_view("conv_bias"), std::span(params.conv_bias));
  fn(std::string_view("fc_weight"), std::span(params.fc_weight));
  fn(std::string_view("fc_bias"), std::span(params.fc_bias));
}

ParamCount CountParams(const ModelConfig& config);

// Uniform on [-s, s], s = 1 / sqrt(fan_in), with fan_in = in_channels * kernel
// for the convolution and out_channels for the classifier. Biases are zero.
ModelParams InitParams(std::uint64_t seed, const ModelConfig& config);

// y[o][t] = bias[o] + sum_{i,k} w[o][i][k] * x[i][t + k - (kernel - 1) / 2],
// with zeros outside [0, T).
Array2D Conv1dSame(const ModelParams& params, const Array2D& x);

enum class Mode { kTrain, kEval };

struct ForwardCache {
  Array2D input;
  Array2D conv_pre_act;
  Array2D relu_mask;     // 1 where conv_pre_act > 0
  Array2D dropout_mask;  // 0 or 1 / (1 - rate) in train mode, 1 in eval
  std::vector<double> pooled;
  std::vector<double> logits;
  std::vector<double> probs;
  Mode mode = Mode::kEval;
};

std::vector<double> Softmax(std::span<const double> logits);

// `rng` drives the dropout masks and is required in train mode; eval mode
// never touches it.
ForwardCache Forward(const ModelParams& params, const Array2D& x, Mode mode,
                     Rng* rng = nullptr);

// Eval-mode pooled features only (conv -> ReLU -> mean over time).
std::vector<double> PooledFeatures(const ModelParams& params, const Array2D& x);

// Gradient of sum_c grad_logits[c] * logits[c] with respect to every
// parameter, using the dropout realization stored in the cache.
Gradients Backward(const ForwardCache& cache, const ModelParams& params,
                   std::span<const double> grad_logits);

}  // namespace lightconv

#endif  // LIGHTCONV_MODEL_H_
