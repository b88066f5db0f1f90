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

#include <vector>

#include <benchmark/benchmark.h>

#include "lightconv/model.h"
#include "lightconv/preprocess.h"
#include "lightconv/random.h"
#include "lightconv/runtime.h"
#include "lightconv/train.h"

namespace lightconv {
namespace {

Array2D Noise(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Array2D a(rows, cols);
  for (double& v : a.values()) v = rng.Normal();
  return a;
}

void BM_ForwardEval(benchmark::State& state) {
  const ModelConfig config{59, 59, static_cast<int>(state.range(0)), 2};
  const ModelParams params = InitParams(1, config);
  const Array2D x = Noise(59, 2500, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Forward(params, x, Mode::kEval).probs);
  }
}
BENCHMARK(BM_ForwardEval)->Arg(11)->Arg(39)->Unit(benchmark::kMillisecond);

void BM_ForwardBackward(benchmark::State& state) {
  const ModelConfig config{59, 59, 11, 2};
  const ModelParams params = InitParams(1, config);
  const Array2D x = Noise(59, 2500, 2);
  Rng rng(3);
  for (auto _ : state) {
    const ForwardCache cache = Forward(params, x, Mode::kTrain, &rng);
    const LossAndGrad lg = CrossEntropy(cache.probs, 1);
    benchmark::DoNotOptimize(Backward(cache, params, lg.grad_logits).conv_weight);
  }
}
BENCHMARK(BM_ForwardBackward)->Unit(benchmark::kMillisecond);

void BM_AdamStep(benchmark::State& state) {
  const ModelConfig config;
  ModelParams params = InitParams(1, config);
  Gradients grads = InitParams(2, config);
  AdamState adam = AdamState::ZerosLike(params);
  const TrainConfig train;
  for (auto _ : state) {
    AdamStep(adam, params, grads, train);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_AdamStep);

void BM_ZeroPhaseHighpass(benchmark::State& state) {
  const FilterCoeffs coeffs = DesignHighpass(1.0, 4, 500.0);
  const Array2D x = Noise(1, static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ApplyZeroPhase(coeffs, x.row(0)));
  }
}
BENCHMARK(BM_ZeroPhaseHighpass)->Arg(2500)->Arg(30000);

void BM_WelchPsd(benchmark::State& state) {
  const Array2D x = Noise(1, 2500, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(WelchPsd(x.row(0), 500.0, 500).power);
  }
}
BENCHMARK(BM_WelchPsd);

}  // namespace
}  // namespace lightconv

int main(int argc, char** argv) {
  lightconv::TuneProcessAllocator();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
