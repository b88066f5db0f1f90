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

#ifndef LIGHTCONV_INTERPRET_H_
#define LIGHTCONV_INTERPRET_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "lightconv/array2d.h"
#include "lightconv/model.h"
#include "lightconv/preprocess.h"
#include "lightconv/random.h"

namespace lightconv {

// Conventional EEG bands, for annotating plots only.
struct FrequencyBand {
  std::string_view name;
  double low_hz;
  double high_hz;  // upper edge; gamma is open-ended
};
inline constexpr std::array<FrequencyBand, 5> kFrequencyBands{{
    {"delta", 0.1, 4.0},
    {"theta", 4.0, 8.0},
    {"alpha", 8.0, 13.0},
    {"beta", 13.0, 30.0},
    {"gamma", 30.0, 0.0},
}};

// Integer frequencies 0, 1, ..., floor(fs / 2).
std::vector<double> IntegerFrequencyGrid(double fs);

struct ProbeSpec {
  std::vector<double> frequencies = IntegerFrequencyGrid(500.0);
  double amplitude = 1.0;
  int repeats_sine = 100;
  int repeats_noise = 300;
  double fs = 500.0;
  std::size_t epoch_len = 2500;
  int channels = 59;
  std::uint64_t seed = 0;
  std::size_t welch_window = 0;  // 0 selects fs samples (1 s)
  double welch_overlap = 0.5;

  // Rejects frequencies outside [0, fs / 2] and non-positive counts.
  void Validate() const;
  std::size_t EffectiveWelchWindow() const;
};

// channel n: amplitude * sin(2 pi f t + phi_n), t = 0, 1/fs, ...,
// (epoch_len - 1)/fs, with phi_n ~ U[0, 2 pi) drawn independently per channel.
Array2D GenSinusoidProbe(double freq_hz, const ProbeSpec& spec, Rng& rng);

// Independent standard normal samples, [channels x epoch_len].
Array2D GenWhiteNoise(const ProbeSpec& spec, Rng& rng);

// activation(o, j): pooled output o averaged over repeats_sine sinusoid
// probes at freqs[j].
struct SensitivityMap {
  std::vector<double> freqs;
  Array2D activation;
};

// Eval mode (no dropout). Deterministic in (checkpoint, spec.seed).
SensitivityMap PoolingSensitivity(const ModelParams& checkpoint,
                                  const ProbeSpec& spec);

// Per conv output channel, the Welch PSD of its response to white noise,
// averaged over repeats_noise probes.
struct FilterResponseMap {
  std::vector<PsdEstimate> channels;
};

// Uses the linear part of the convolution only: outputs are taken before the
// ReLU and without the bias, so each response estimates
// sum_i |H_{o,i}(f)|^2 times the (flat) input density.
FilterResponseMap ConvFilterResponse(const ModelParams& checkpoint,
                                     const ProbeSpec& spec);

// Header row of frequencies, then one row per pooled output.
void WriteSensitivityCsv(const std::filesystem::path& path,
                         const SensitivityMap& map);

// One "freq,power" file per output channel: <dir>/channel_NNN.csv.
void WriteFilterResponseCsvs(const std::filesystem::path& dir,
                             const FilterResponseMap& map);

}  // namespace lightconv

#endif  // LIGHTCONV_INTERPRET_H_
