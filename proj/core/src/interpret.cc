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

#include "lightconv/interpret.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "conv_kernels.h"
#include "format.h"
#include "lightconv/error.h"
#include "lightconv/parallel.h"

namespace lightconv {
namespace {

constexpr std::uint64_t kSineStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
// Noise repeats are summed in this many fixed chunks so the floating-point
// reduction order does not depend on the thread count.
constexpr std::size_t kNoiseChunks = 16;

void CheckModelMatchesSpec(const ModelParams& params, const ProbeSpec& spec) {
  params.CheckShapes();
  if (params.config.in_channels != spec.channels) {
    throw InvalidArgumentError("probe has " + std::to_string(spec.channels) +
                               " channels, model expects " +
                               std::to_string(params.config.in_channels));
  }
}

}  // namespace

std::vector<double> IntegerFrequencyGrid(double fs) {
  std::vector<double> grid;
  const auto top = static_cast<int>(std::floor(fs / 2.0));
  for (int f = 0; f <= top; ++f) grid.push_back(f);
  return grid;
}

void ProbeSpec::Validate() const {
  if (!(fs > 0.0)) throw InvalidArgumentError("probe fs must be positive");
  if (frequencies.empty()) throw InvalidArgumentError("probe has no frequencies");
  for (double f : frequencies) {
    if (!(f >= 0.0 && f <= fs / 2.0)) {
      throw InvalidArgumentError("probe frequency " + internal::ShortestRepr(f) +
                                 " Hz lies outside [0, Nyquist = " +
                                 internal::ShortestRepr(fs / 2.0) + " Hz]");
    }
  }
  if (repeats_sine < 1 || repeats_noise < 1) {
    throw InvalidArgumentError("probe repeat counts must be >= 1");
  }
  if (channels < 1 || epoch_len < 1) {
    throw InvalidArgumentError("probe shape must be positive");
  }
  if (EffectiveWelchWindow() > epoch_len || EffectiveWelchWindow() == 0) {
    throw InvalidArgumentError("Welch window must be in [1, epoch_len]");
  }
}

std::size_t ProbeSpec::EffectiveWelchWindow() const {
  return welch_window ? welch_window : static_cast<std::size_t>(std::lround(fs));
}

Array2D GenSinusoidProbe(double freq_hz, const ProbeSpec& spec, Rng& rng) {
  if (!(freq_hz >= 0.0 && freq_hz <= spec.fs / 2.0)) {
    throw InvalidArgumentError("probe frequency " + internal::ShortestRepr(freq_hz) +
                               " Hz is above the Nyquist frequency");
  }
  // sin(a + phi) = sin(a) cos(phi) + cos(a) sin(phi) with a shared table.
  std::vector<double> sin_table(spec.epoch_len), cos_table(spec.epoch_len);
  const double omega = 2.0 * std::numbers::pi * freq_hz / spec.fs;
  for (std::size_t n = 0; n < spec.epoch_len; ++n) {
    const double angle = omega * static_cast<double>(n);
    sin_table[n] = std::sin(angle);
    cos_table[n] = std::cos(angle);
  }
  Array2D probe(spec.channels, spec.epoch_len);
  for (int c = 0; c < spec.channels; ++c) {
    const double phase = rng.Uniform(0.0, 2.0 * std::numbers::pi);
    const double a = spec.amplitude * std::cos(phase);
    const double b = spec.amplitude * std::sin(phase);
    auto row = probe.row(c);
    for (std::size_t n = 0; n < spec.epoch_len; ++n) {
      row[n] = a * sin_table[n] + b * cos_table[n];
    }
  }
  return probe;
}

Array2D GenWhiteNoise(const ProbeSpec& spec, Rng& rng) {
  Array2D probe(spec.channels, spec.epoch_len);
  for (double& v : probe.values()) v = rng.Normal();
  return probe;
}

SensitivityMap PoolingSensitivity(const ModelParams& checkpoint,
                                  const ProbeSpec& spec) {
  spec.Validate();
  CheckModelMatchesSpec(checkpoint, spec);
  const std::size_t outputs = checkpoint.config.out_channels;
  SensitivityMap map;
  map.freqs = spec.frequencies;
  map.activation = Array2D(outputs, spec.frequencies.size());

  ParallelFor(spec.frequencies.size(), [&](std::size_t j) {
    std::vector<double> sum(outputs, 0.0);
    for (int r = 0; r < spec.repeats_sine; ++r) {
      Rng rng(DeriveSeed(spec.seed, {kSineStream, j, static_cast<std::uint64_t>(r)}));
      const Array2D probe = GenSinusoidProbe(spec.frequencies[j], spec, rng);
      const std::vector<double> pooled = PooledFeatures(checkpoint, probe);
      for (std::size_t o = 0; o < outputs; ++o) sum[o] += pooled[o];
    }
    for (std::size_t o = 0; o < outputs; ++o) {
      map.activation(o, j) = sum[o] / spec.repeats_sine;
    }
  });
  return map;
}

FilterResponseMap ConvFilterResponse(const ModelParams& checkpoint,
                                     const ProbeSpec& spec) {
  spec.Validate();
  CheckModelMatchesSpec(checkpoint, spec);
  const auto& c = checkpoint.config;
  const std::size_t window = spec.EffectiveWelchWindow();
  const std::size_t bins = window / 2 + 1;
  const std::size_t repeats = spec.repeats_noise;
  const std::size_t chunks = std::min(kNoiseChunks, repeats);

  std::vector<Array2D> partial(chunks);
  ParallelFor(chunks, [&](std::size_t chunk) {
    Array2D acc(c.out_channels, bins);
    for (std::size_t r = chunk; r < repeats; r += chunks) {
      Rng rng(DeriveSeed(spec.seed, {kNoiseStream, r}));
      const Array2D noise = GenWhiteNoise(spec, rng);
      Array2D response;
      internal::ConvForward(checkpoint.conv_weight, c.out_channels, c.in_channels,
                            c.kernel, noise, response);
      for (int o = 0; o < c.out_channels; ++o) {
        const PsdEstimate psd =
            WelchPsd(response.row(o), spec.fs, window, spec.welch_overlap);
        auto dst = acc.row(o);
        for (std::size_t k = 0; k < bins; ++k) dst[k] += psd.power[k];
      }
    }
    partial[chunk] = std::move(acc);
  });

  const std::vector<double> zeros(window, 0.0);
  const PsdEstimate axis = WelchPsd(zeros, spec.fs, window, spec.welch_overlap);
  FilterResponseMap map;
  for (int o = 0; o < c.out_channels; ++o) {
    PsdEstimate psd = axis;
    for (std::size_t k = 0; k < bins; ++k) {
      double total = 0.0;
      for (const Array2D& p : partial) total += p(o, k);
      psd.power[k] = total / static_cast<double>(repeats);
    }
    map.channels.push_back(std::move(psd));
  }
  return map;
}

void WriteSensitivityCsv(const std::filesystem::path& path,
                         const SensitivityMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.precision(17);
  for (std::size_t j = 0; j < map.freqs.size(); ++j) {
    if (j) out << ',';
    out << map.freqs[j];
  }
  out << '\n';
  for (std::size_t o = 0; o < map.activation.rows(); ++o) {
    const auto row = map.activation.row(o);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << row[j];
    }
    out << '\n';
  }
}

void WriteFilterResponseCsvs(const std::filesystem::path& dir,
                             const FilterResponseMap& map) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  for (std::size_t o = 0; o < map.channels.size(); ++o) {
    char name[32];
    std::snprintf(name, sizeof(name), "channel_%03zu.csv", o);
    WritePsdCsv(dir / name, map.channels[o]);
  }
}

}  // namespace lightconv
