// Copyright 2026 The vqtts-kit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VQTTS_WAV_H_
#define VQTTS_WAV_H_

#include <string>
#include <vector>

namespace vqtts {

struct Waveform {
  std::vector<double> samples;  // amplitudes in [-1, 1]
  int sample_rate = 16000;
};

// Reads a RIFF WAV file holding 16-bit PCM mono audio. Stereo or other
// sample formats are rejected. Sample rates other than 16 kHz are accepted
// and recorded as-is; no resampling is performed.
Waveform read_wav(const std::string& path);

// Writes 16-bit PCM mono. Samples are clipped to [-1, 1].
void write_wav(const std::string& path, const Waveform& wave);

}  // namespace vqtts

#endif  // VQTTS_WAV_H_
