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

#ifndef LIGHTCONV_PREPROCESS_H_
#define LIGHTCONV_PREPROCESS_H_

#include <array>
#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "lightconv/array2d.h"

namespace lightconv {

// Rational transfer function H(z) = B(z^-1) / A(z^-1) with a[0] == 1.
struct FilterCoeffs {
  std::vector<double> b;
  std::vector<double> a;
  // The same H(z) factored into second-order sections {b0, b1, b2, a0, a1,
  // a2}. Filled by DesignHighpass; when empty, b and a are used directly.
  std::vector<std::array<double, 6>> sections;
  double cutoff_hz = 0.0;
  int order = 0;
  double fs = 0.0;
};

// Butterworth high-pass by bilinear transform with frequency pre-warping, so
// the single-pass magnitude at cutoff_hz is exactly 1/sqrt(2) (-3.01 dB) and
// the gain at Nyquist is 1. Requires 0 < cutoff_hz < fs / 2 and order >= 1.
FilterCoeffs DesignHighpass(double cutoff_hz, int order, double fs);

// H(e^{j 2 pi f / fs}) for a single pass of the filter, evaluated from the
// sections when present.
std::complex<double> FrequencyResponse(const FilterCoeffs& coeffs,
                                       double freq_hz);

// Schur-Cohn test: true when every root of A lies strictly inside the unit
// circle.
bool IsStable(const FilterCoeffs& coeffs);

// Single forward pass (transposed direct form II) from the given initial
// state; `state` must have max(len(a), len(b)) - 1 entries.
std::vector<double> FilterForward(const FilterCoeffs& coeffs,
                                  std::span<const double> signal,
                                  std::span<const double> state = {});

// Forward-backward filtering. The signal is extended at both ends by odd
// reflection over 3 * max(len(a), len(b)) samples, and each pass starts from
// the step-response steady state scaled by its first sample. Runs the
// section cascade when sections are present. Output has the input's length
// and zero phase; the magnitude response is |H|^2.
std::vector<double> ApplyZeroPhase(const FilterCoeffs& coeffs,
                                   std::span<const double> signal);

// Applies ApplyZeroPhase to every row.
Array2D ApplyZeroPhase(const FilterCoeffs& coeffs, const Array2D& channels);

// One-sided power spectral density, amplitude^2 / Hz.
struct PsdEstimate {
  std::vector<double> freqs;
  std::vector<double> power;
  std::size_t window_len = 0;
  double overlap = 0.0;
};

// Welch's averaged periodogram with a periodic Hann window and no detrending.
// Segments start every window_len - floor(overlap * window_len) samples;
// bins are spaced fs / window_len from 0 to fs / 2. Density scaling
// (|X|^2 / (fs * sum w^2), doubled off DC and Nyquist), so summing power * df
// recovers the signal's mean square.
PsdEstimate WelchPsd(std::span<const double> signal, double fs,
                     std::size_t window_len, double overlap = 0.5);

// "freq,power" rows.
void WritePsdCsv(const std::filesystem::path& path, const PsdEstimate& psd);

}  // namespace lightconv

#endif  // LIGHTCONV_PREPROCESS_H_
