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

#include <cmath>
#include <complex>
#include <vector>

#include <benchmark/benchmark.h>

#include "vqtts/dsp.h"
#include "vqtts/wav.h"

namespace {

vqtts::Waveform make_tone(double freq, double seconds, int rate) {
  vqtts::Waveform w;
  w.sample_rate = rate;
  auto n = static_cast<std::size_t>(seconds * rate);
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    w.samples[i] =
        0.5 * std::sin(2.0 * M_PI * freq * static_cast<double>(i) / rate);
  return w;
}

void BM_extract_prosody(benchmark::State& state) {
  vqtts::Waveform wave = make_tone(220.0, 1.0, 16000);
  vqtts::dsp::FrameSpec spec;
  vqtts::dsp::PitchRange range;
  for (auto _ : state) {
    auto track = vqtts::dsp::extract_prosody(wave, spec, range, 0.3);
    benchmark::DoNotOptimize(track.frames.data.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(wave.samples.size()));
}
BENCHMARK(BM_extract_prosody)->Unit(benchmark::kMillisecond);

void BM_mel_spectrogram(benchmark::State& state) {
  vqtts::Waveform wave = make_tone(220.0, 1.0, 16000);
  vqtts::dsp::FrameSpec spec;
  for (auto _ : state) {
    auto mel = vqtts::dsp::mel_spectrogram(wave, spec, 512, 80);
    benchmark::DoNotOptimize(mel.frames.data.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(wave.samples.size()));
}
BENCHMARK(BM_mel_spectrogram)->Unit(benchmark::kMillisecond);

void BM_fft(benchmark::State& state) {
  std::vector<std::complex<double>> base(512);
  for (std::size_t i = 0; i < base.size(); ++i)
    base[i] = std::sin(0.1 * static_cast<double>(i));
  for (auto _ : state) {
    std::vector<std::complex<double>> buf = base;
    vqtts::dsp::fft(buf);
    benchmark::DoNotOptimize(buf.data());
  }
}
BENCHMARK(BM_fft);

}  // namespace
