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

#include "lightconv/synthetic.h"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "lightconv/error.h"
#include "lightconv/random.h"

namespace lightconv {

std::vector<SubjectRecording> MakeSyntheticSubjects(const SyntheticSpec& spec) {
  if (spec.subjects < 1 || spec.epochs_per_subject < 1 || spec.channels < 1 ||
      !(spec.fs > 0.0) || !(spec.epoch_seconds > 0.0)) {
    throw InvalidArgumentError("synthetic dataset dimensions must be positive");
  }
  const auto length = static_cast<std::size_t>(
      std::lround(spec.epoch_seconds * spec.fs) * spec.epochs_per_subject);
  const double signal_power = spec.amplitude * spec.amplitude / 2.0;
  const double noise_sd = std::sqrt(signal_power / std::pow(10.0, spec.snr_db / 10.0));

  std::vector<SubjectRecording> subjects;
  for (int s = 0; s < spec.subjects; ++s) {
    SubjectRecording rec;
    char id[16];
    std::snprintf(id, sizeof(id), "S%03d", s + 1);
    rec.subject_id = id;
    rec.label = s % 2 == 0 ? ClassLabel::kControl : ClassLabel::kPd;
    rec.fs = spec.fs;
    rec.samples = Array2D(spec.channels, length);
    for (int c = 0; c < spec.channels; ++c) {
      rec.channel_names.push_back("ch" + std::to_string(c + 1));
    }
    const double freq =
        rec.label == ClassLabel::kPd ? spec.pd_freq_hz : spec.control_freq_hz;
    const double omega = 2.0 * std::numbers::pi * freq / spec.fs;
    Rng rng(DeriveSeed(spec.seed, {static_cast<std::uint64_t>(s)}));
    // One rhythm phase per subject, shared by every channel.
    const double phase = rng.Uniform(0.0, 2.0 * std::numbers::pi);
    for (int c = 0; c < spec.channels; ++c) {
      auto row = rec.samples.row(c);
      for (std::size_t t = 0; t < length; ++t) {
        row[t] = spec.amplitude * std::sin(omega * static_cast<double>(t) + phase) +
                 noise_sd * rng.Normal();
      }
    }
    subjects.push_back(std::move(rec));
  }
  return subjects;
}

}  // namespace lightconv
