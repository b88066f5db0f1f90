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

#ifndef LIGHTCONV_SYNTHETIC_H_
#define LIGHTCONV_SYNTHETIC_H_

#include <cstdint>
#include <vector>

#include "lightconv/signal_io.h"

namespace lightconv {

// Two-class stand-in for EEG: every channel of a Control subject carries a
// sinusoid at control_freq_hz, every channel of a PD subject one at
// pd_freq_hz, each with its own random phase, plus white Gaussian noise at
// the requested signal-to-noise ratio. Subjects alternate Control, PD, ...
struct SyntheticSpec {
  int subjects = 20;
  int epochs_per_subject = 12;
  double epoch_seconds = 5.0;
  double fs = 500.0;
  int channels = 59;
  double control_freq_hz = 10.0;
  double pd_freq_hz = 25.0;
  double amplitude = 1.0;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
};

std::vector<SubjectRecording> MakeSyntheticSubjects(const SyntheticSpec& spec);

}  // namespace lightconv

#endif  // LIGHTCONV_SYNTHETIC_H_
