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

#ifndef VQTTS_DSP_H_
#define VQTTS_DSP_H_

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "vqtts/matrix.h"
#include "vqtts/wav.h"

namespace vqtts {
namespace dsp {

constexpr double kLogFloor = 1e-10;

struct FrameSpec {
  double frame_length_ms = 25.0;
  double frame_shift_ms = 10.0;
};

struct PitchRange {
  double f_min = 60.0;
  double f_max = 400.0;
};

// Per-frame [log_pitch, energy, pov] plus a voiced flag per frame.
// log_pitch is finite on every frame: unvoiced gaps are linearly
// interpolated between the neighbouring voiced frames, edges hold the
// nearest voiced value, and a track with no voiced frame at all falls back
// to the log of the geometric midpoint of the pitch search range.
struct ProsodyTrack {
  Matrix frames;                // T x 3
  std::vector<uint8_t> voiced;  // length T
};

struct NormStats {
  std::array<double, 3> mean{};
  std::array<double, 3> stddev{};
};

struct MelSpectrogram {
  Matrix frames;  // T x n_mels, log mel energies
  int n_mels = 80;
};

std::size_t frame_length_samples(const FrameSpec& spec, int sample_rate);
std::size_t frame_shift_samples(const FrameSpec& spec, int sample_rate);

// Number of frames for a signal of n_samples: floor((n - len)/shift) + 1.
// Throws "insufficient samples" when the signal is shorter than one frame.
std::size_t frame_count(std::size_t n_samples, const FrameSpec& spec,
                        int sample_rate);

// Pitch by normalized cross-correlation over the lag range
// [rate/f_max, rate/f_min], with parabolic interpolation of the peak lag.
// POV is the peak correlation clamped to [0, 1]; a frame is voiced when
// POV >= voicing_threshold. energy = log(RMS + kLogFloor).
ProsodyTrack extract_prosody(const Waveform& wave, const FrameSpec& spec,
                             const PitchRange& range,
                             double voicing_threshold = 0.3);

// Hann-windowed magnitude STFT, triangular mel filterbank (HTK mel scale,
// f_min = 0, f_max = rate/2), log with floor kLogFloor. n_fft must be a
// power of two and at least the frame length in samples.
MelSpectrogram mel_spectrogram(const Waveform& wave, const FrameSpec& spec,
                               int n_fft = 512, int n_mels = 80);

// T x d input -> T x 3d output with columns [p, delta p, delta^2 p].
// delta_t = sum_{w=1..W} w * (p_{t+w} - p_{t-w}) / (2 * sum w^2) with
// indices clamped at the track boundaries. The second delta applies the
// same stencil to the first.
Matrix delta_features(const Matrix& track, int window = 2);

// Per-dimension mean and standard deviation over all frames of the corpus,
// accumulated as per-track partial sums folded in list order (so a
// parallel per-track computation reduces to the same bits).
// Throws "degenerate dimension" when any dimension has zero variance.
NormStats compute_stats(const std::vector<ProsodyTrack>& corpus);

ProsodyTrack normalize(const ProsodyTrack& track, const NormStats& stats);
ProsodyTrack denormalize(const ProsodyTrack& track, const NormStats& stats);

// In-place radix-2 FFT, size must be a power of two. Exposed for tests.
void fft(std::vector<std::complex<double>>& buf);

// Center frequency (Hz) of mel filter m out of n_mels over [0, rate/2].
// Exposed so tests and pitch rendering can reason about bin placement.
double mel_to_hz(double mel);
double hz_to_mel(double hz);

}  // namespace dsp
}  // namespace vqtts

#endif  // VQTTS_DSP_H_
