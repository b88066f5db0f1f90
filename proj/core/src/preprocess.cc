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

#include "lightconv/preprocess.h"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "format.h"
#include "lightconv/error.h"

namespace lightconv {
namespace {

using Complex = std::complex<double>;

// Coefficients of prod_k (1 - r_k z^-1), highest power of z^-1 last.
std::vector<Complex> ExpandRoots(const std::vector<Complex>& roots) {
  std::vector<Complex> poly{1.0};
  for (const Complex& r : roots) {
    poly.push_back(0.0);
    for (std::size_t i = poly.size() - 1; i > 0; --i) poly[i] -= r * poly[i - 1];
  }
  return poly;
}

std::size_t StateSize(const FilterCoeffs& c) {
  return std::max(c.a.size(), c.b.size()) - 1;
}

// Equal-length copies of b and a.
void PaddedCoeffs(const FilterCoeffs& c, std::vector<double>& b,
                  std::vector<double>& a) {
  const std::size_t n = StateSize(c) + 1;
  b = c.b;
  a = c.a;
  b.resize(n, 0.0);
  a.resize(n, 0.0);
}

// Filter state whose output stays constant under a unit step.
std::vector<double> StepSteadyState(const FilterCoeffs& c) {
  std::vector<double> b, a;
  PaddedCoeffs(c, b, a);
  double sum_b = 0, sum_a = 0;
  for (double v : b) sum_b += v;
  for (double v : a) sum_a += v;
  const double dc = sum_b / sum_a;
  const std::size_t n = b.size() - 1;
  std::vector<double> zi(n, 0.0);
  double acc = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    acc += b[i + 1] - a[i + 1] * dc;
    zi[i] = acc;
  }
  return zi;
}

using Section = std::array<double, 6>;

// Unit-step steady state of each section, scaled by the DC gain of the
// sections before it.
std::vector<std::array<double, 2>> CascadeSteadyState(const std::vector<Section>& sections) {
  std::vector<std::array<double, 2>> zi(sections.size());
  double scale = 1.0;
  for (std::size_t k = 0; k < sections.size(); ++k) {
    const Section& s = sections[k];
    const double dc = (s[0] + s[1] + s[2]) / (s[3] + s[4] + s[5]);
    zi[k][1] = scale * (s[2] - s[5] * dc);
    zi[k][0] = scale * (s[1] - s[4] * dc) + zi[k][1];
    scale *= dc;
  }
  return zi;
}

// Runs the cascade in place, each section in transposed direct form II
// starting from zi[k] * x0.
void FilterCascade(const std::vector<Section>& sections,
                   const std::vector<std::array<double, 2>>& zi,
                   std::vector<double>& x) {
  if (x.empty()) return;
  const double x0 = x.front();
  for (std::size_t k = 0; k < sections.size(); ++k) {
    const Section& s = sections[k];
    double z0 = zi[k][0] * x0, z1 = zi[k][1] * x0;
    for (double& v : x) {
      const double in = v;
      const double out = s[0] * in + z0;
      z0 = s[1] * in - s[4] * out + z1;
      z1 = s[2] * in - s[5] * out;
      v = out;
    }
  }
}

// Cached FFTW plans keyed by transform length. Planning is not thread-safe
// in FFTW, execution on caller-owned buffers is.
fftw_plan R2cPlan(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, fftw_plan> plans;
  std::lock_guard lock(mu);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second;
  std::vector<double> in(n);
  std::vector<fftw_complex> out(n / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out.data(),
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan == nullptr) throw Error(ErrorKind::kNumeric, "FFT planning failed");
  plans.emplace(n, plan);
  return plan;
}

}  // namespace

FilterCoeffs DesignHighpass(double cutoff_hz, int order, double fs) {
  if (!(fs > 0.0)) throw InvalidArgumentError("sampling rate must be positive");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < fs / 2.0)) {
    throw InvalidArgumentError("cutoff must lie strictly between 0 and the "
                               "Nyquist frequency " + internal::ShortestRepr(fs / 2.0) +
                               " Hz");
  }
  if (order < 1) throw InvalidArgumentError("filter order must be >= 1");

  const double warped = 2.0 * fs * std::tan(std::numbers::pi * cutoff_hz / fs);
  std::vector<Complex> poles;
  for (int k = 0; k < order; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + order + 1) / (2.0 * order);
    const Complex prototype = std::polar(1.0, theta);
    const Complex analog = warped / prototype;  // low-pass to high-pass
    poles.push_back((2.0 * fs + analog) / (2.0 * fs - analog));
  }
  const std::vector<Complex> zeros(order, Complex(1.0, 0.0));

  FilterCoeffs c;
  c.cutoff_hz = cutoff_hz;
  c.order = order;
  c.fs = fs;
  for (const Complex& v : ExpandRoots(zeros)) c.b.push_back(v.real());
  for (const Complex& v : ExpandRoots(poles)) c.a.push_back(v.real());

  // Conjugate pairs k and order-1-k form biquads with a double zero at z = 1;
  // an odd order leaves one real pole. Each section has unit gain at Nyquist.
  for (int k = 0; k < order / 2; ++k) {
    const Complex p = poles[static_cast<std::size_t>(k)];
    const double a1 = -2.0 * p.real();
    const double a2 = std::norm(p);
    const double g = (1.0 - a1 + a2) / 4.0;
    c.sections.push_back({g, -2.0 * g, g, 1.0, a1, a2});
  }
  if (order % 2 == 1) {
    const double p = poles[static_cast<std::size_t>(order / 2)].real();
    const double g = (1.0 + p) / 2.0;
    c.sections.push_back({g, -g, 0.0, 1.0, -p, 0.0});
  }

  double num = 0, den = 0, sign = 1;
  for (std::size_t i = 0; i < c.b.size(); ++i, sign = -sign) {
    num += sign * c.b[i];
    den += sign * c.a[i];
  }
  const double scale = den / num;  // unit gain at Nyquist
  for (double& v : c.b) v *= scale;
  return c;
}

std::complex<double> FrequencyResponse(const FilterCoeffs& coeffs,
                                       double freq_hz) {
  const double omega = 2.0 * std::numbers::pi * freq_hz / coeffs.fs;
  if (!coeffs.sections.empty()) {
    const Complex z1 = std::polar(1.0, -omega), z2 = std::polar(1.0, -2.0 * omega);
    Complex h = 1.0;
    for (const auto& s : coeffs.sections) {
      h *= (s[0] + s[1] * z1 + s[2] * z2) / (s[3] + s[4] * z1 + s[5] * z2);
    }
    return h;
  }
  Complex num = 0, den = 0;
  for (std::size_t k = 0; k < coeffs.b.size(); ++k) {
    num += coeffs.b[k] * std::polar(1.0, -omega * static_cast<double>(k));
  }
  for (std::size_t k = 0; k < coeffs.a.size(); ++k) {
    den += coeffs.a[k] * std::polar(1.0, -omega * static_cast<double>(k));
  }
  return num / den;
}

bool IsStable(const FilterCoeffs& coeffs) {
  std::vector<double> a = coeffs.a;
  while (a.size() > 1 && a.back() == 0.0) a.pop_back();
  if (a.empty() || a[0] == 0.0) return false;
  for (double& v : a) v /= coeffs.a[0];
  for (std::size_t m = a.size() - 1; m >= 1; --m) {
    const double k = a[m];
    if (!(std::abs(k) < 1.0)) return false;
    std::vector<double> next(m);
    for (std::size_t i = 0; i < m; ++i) {
      next[i] = (a[i] - k * a[m - i]) / (1.0 - k * k);
    }
    a = std::move(next);
  }
  return true;
}

std::vector<double> FilterForward(const FilterCoeffs& coeffs,
                                  std::span<const double> signal,
                                  std::span<const double> state) {
  std::vector<double> b, a;
  PaddedCoeffs(coeffs, b, a);
  const std::size_t n = b.size() - 1;
  std::vector<double> z(n, 0.0);
  if (!state.empty()) {
    if (state.size() != n) throw InvalidArgumentError("filter state size mismatch");
    std::copy(state.begin(), state.end(), z.begin());
  }
  std::vector<double> y(signal.size());
  for (std::size_t t = 0; t < signal.size(); ++t) {
    const double x = signal[t];
    const double out = b[0] * x + (n ? z[0] : 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      z[i] = b[i + 1] * x - a[i + 1] * out + z[i + 1];
    }
    if (n) z[n - 1] = b[n] * x - a[n] * out;
    y[t] = out;
  }
  return y;
}

std::vector<double> ApplyZeroPhase(const FilterCoeffs& coeffs,
                                   std::span<const double> signal) {
  const std::size_t pad = 3 * (StateSize(coeffs) + 1);
  if (signal.size() <= pad) {
    throw InvalidArgumentError("signal of " + std::to_string(signal.size()) +
                               " samples is too short for zero-phase filtering "
                               "(needs more than " + std::to_string(pad) + ")");
  }
  const std::size_t n = signal.size();
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * signal[0] - signal[i]);
  ext.insert(ext.end(), signal.begin(), signal.end());
  for (std::size_t i = 1; i <= pad; ++i) {
    ext.push_back(2.0 * signal[n - 1] - signal[n - 1 - i]);
  }

  if (!coeffs.sections.empty()) {
    const auto zi = CascadeSteadyState(coeffs.sections);
    FilterCascade(coeffs.sections, zi, ext);
    std::reverse(ext.begin(), ext.end());
    FilterCascade(coeffs.sections, zi, ext);
    std::reverse(ext.begin(), ext.end());
    return {ext.begin() + static_cast<std::ptrdiff_t>(pad),
            ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
  }

  const std::vector<double> zi = StepSteadyState(coeffs);
  std::vector<double> state(zi.size());
  for (std::size_t i = 0; i < zi.size(); ++i) state[i] = zi[i] * ext.front();
  std::vector<double> forward = FilterForward(coeffs, ext, state);

  std::reverse(forward.begin(), forward.end());
  for (std::size_t i = 0; i < zi.size(); ++i) state[i] = zi[i] * forward.front();
  std::vector<double> backward = FilterForward(coeffs, forward, state);
  std::reverse(backward.begin(), backward.end());

  return {backward.begin() + static_cast<std::ptrdiff_t>(pad),
          backward.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

Array2D ApplyZeroPhase(const FilterCoeffs& coeffs, const Array2D& channels) {
  Array2D out(channels.rows(), channels.cols());
  for (std::size_t r = 0; r < channels.rows(); ++r) {
    const std::vector<double> filtered = ApplyZeroPhase(coeffs, channels.row(r));
    std::copy(filtered.begin(), filtered.end(), out.row(r).begin());
  }
  return out;
}

PsdEstimate WelchPsd(std::span<const double> signal, double fs,
                     std::size_t window_len, double overlap) {
  if (window_len == 0) throw InvalidArgumentError("Welch window must be non-empty");
  if (window_len > signal.size()) {
    throw InvalidArgumentError("Welch window (" + std::to_string(window_len) +
                               ") is longer than the signal (" +
                               std::to_string(signal.size()) + ")");
  }
  if (!(overlap >= 0.0 && overlap < 1.0)) {
    throw InvalidArgumentError("Welch overlap must be in [0, 1)");
  }
  if (!(fs > 0.0)) throw InvalidArgumentError("sampling rate must be positive");

  const std::size_t overlap_len =
      static_cast<std::size_t>(std::floor(overlap * static_cast<double>(window_len)));
  const std::size_t step = std::max<std::size_t>(1, window_len - overlap_len);
  const std::size_t segments = (signal.size() - window_len) / step + 1;
  const std::size_t bins = window_len / 2 + 1;

  std::vector<double> window(window_len);
  double window_power = 0.0;
  for (std::size_t i = 0; i < window_len; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                     static_cast<double>(i) /
                                     static_cast<double>(window_len));
    window_power += window[i] * window[i];
  }

  fftw_plan plan = R2cPlan(window_len);
  std::vector<double> frame(window_len);
  std::vector<fftw_complex> spectrum(bins);
  std::vector<double> accum(bins, 0.0);
  for (std::size_t s = 0; s < segments; ++s) {
    const std::size_t start = s * step;
    for (std::size_t i = 0; i < window_len; ++i) {
      frame[i] = window[i] * signal[start + i];
    }
    fftw_execute_dft_r2c(plan, frame.data(), spectrum.data());
    for (std::size_t k = 0; k < bins; ++k) {
      accum[k] += spectrum[k][0] * spectrum[k][0] + spectrum[k][1] * spectrum[k][1];
    }
  }

  PsdEstimate psd;
  psd.window_len = window_len;
  psd.overlap = overlap;
  psd.freqs.resize(bins);
  psd.power.resize(bins);
  const double scale = 1.0 / (fs * window_power * static_cast<double>(segments));
  const bool has_nyquist = window_len % 2 == 0;
  for (std::size_t k = 0; k < bins; ++k) {
    psd.freqs[k] = static_cast<double>(k) * fs / static_cast<double>(window_len);
    const bool edge = k == 0 || (has_nyquist && k == bins - 1);
    psd.power[k] = accum[k] * scale * (edge ? 1.0 : 2.0);
  }
  return psd;
}

void WritePsdCsv(const std::filesystem::path& path, const PsdEstimate& psd) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.precision(17);
  out << "freq,power\n";
  for (std::size_t k = 0; k < psd.freqs.size(); ++k) {
    out << psd.freqs[k] << ',' << psd.power[k] << '\n';
  }
}

}  // namespace lightconv
