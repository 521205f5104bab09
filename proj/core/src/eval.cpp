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

#include "vqtts/eval.h"

#include <cmath>
#include <stdexcept>

namespace vqtts {
namespace eval {

double txt2vec_loss(const LossBreakdown& lb) {
  return lb.pl_lab + lb.dur + lb.vq + lb.pros;
}

double warmup_weight(const WarmupConfig& cfg, int64_t step) {
  if (step < 0) throw std::invalid_argument("step must be >= 0");
  return step < cfg.warmup_steps ? cfg.alpha : 0.0;
}

double vec2wav_loss(const LossBreakdown& lb, const WarmupConfig& cfg,
                    int64_t step) {
  return lb.hifigan + warmup_weight(cfg, step) * lb.mel;
}

double gpe(const dsp::ProsodyTrack& ref, const dsp::ProsodyTrack& hyp,
           double threshold) {
  if (ref.frames.rows != hyp.frames.rows)
    throw std::invalid_argument("track length mismatch");
  int64_t voiced = 0, gross = 0;
  for (std::size_t t = 0; t < ref.frames.rows; ++t) {
    if (!ref.voiced[t] || !hyp.voiced[t]) continue;
    ++voiced;
    double f_ref = std::exp(ref.frames.at(t, 0));
    double f_hyp = std::exp(hyp.frames.at(t, 0));
    if (std::abs(f_hyp - f_ref) / f_ref > threshold) ++gross;
  }
  if (voiced == 0) throw std::runtime_error("no voiced overlap");
  return static_cast<double>(gross) / static_cast<double>(voiced);
}

double token_accuracy(const std::vector<int>& ref,
                      const std::vector<int>& hyp) {
  if (ref.size() != hyp.size())
    throw std::invalid_argument("sequence length mismatch");
  if (ref.empty()) throw std::invalid_argument("empty sequences");
  int64_t hits = 0;
  for (std::size_t i = 0; i < ref.size(); ++i)
    if (ref[i] == hyp[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(ref.size());
}

Matrix hypothesis_divergence(const std::vector<dsp::ProsodyTrack>& tracks) {
  if (tracks.size() < 2)
    throw std::invalid_argument("need at least 2 tracks");
  std::size_t T = tracks[0].frames.rows;
  for (const auto& tr : tracks)
    if (tr.frames.rows != T)
      throw std::invalid_argument("track length mismatch");

  Matrix out(tracks.size(), tracks.size());
  for (std::size_t a = 0; a < tracks.size(); ++a) {
    for (std::size_t b = a + 1; b < tracks.size(); ++b) {
      int64_t voiced = 0;
      double sum = 0.0;
      for (std::size_t t = 0; t < T; ++t) {
        if (!tracks[a].voiced[t] || !tracks[b].voiced[t]) continue;
        ++voiced;
        sum += std::abs(tracks[a].frames.at(t, 0) - tracks[b].frames.at(t, 0));
      }
      if (voiced == 0) throw std::runtime_error("no voiced overlap");
      double d = sum / static_cast<double>(voiced);
      out.at(a, b) = d;
      out.at(b, a) = d;
    }
  }
  return out;
}

}  // namespace eval
}  // namespace vqtts
