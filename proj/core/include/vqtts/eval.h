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

#ifndef VQTTS_EVAL_H_
#define VQTTS_EVAL_H_

#include <vector>

#include "vqtts/dsp.h"
#include "vqtts/matrix.h"

namespace vqtts {
namespace eval {

struct LossBreakdown {
  double pl_lab = 0.0;
  double dur = 0.0;
  double vq = 0.0;
  double pros = 0.0;
  double hifigan = 0.0;
  double mel = 0.0;
};

struct WarmupConfig {
  double alpha = 60.0;
  int64_t warmup_steps = 200000;
};

struct EvalReport {
  double gpe = 0.0;
  double token_accuracy = 0.0;
  int64_t n_voiced_frames = 0;
  int64_t n_tokens = 0;
};

// Sum of the four acoustic-model loss terms.
double txt2vec_loss(const LossBreakdown& lb);

// Mel-loss weight schedule: alpha while step < warmup_steps, 0 after.
double warmup_weight(const WarmupConfig& cfg, int64_t step);

double vec2wav_loss(const LossBreakdown& lb, const WarmupConfig& cfg,
                    int64_t step);

// Fraction of jointly voiced frames whose linear-Hz pitch deviates from
// the reference by more than `threshold` (relative). Tracks must have
// equal frame counts; throws "no voiced overlap" when no frame is voiced
// in both.
double gpe(const dsp::ProsodyTrack& ref, const dsp::ProsodyTrack& hyp,
           double threshold = 0.2);

// Positional match fraction over equal-length sequences.
double token_accuracy(const std::vector<int>& ref, const std::vector<int>& hyp);

// Pairwise mean absolute log-pitch difference over jointly voiced frames.
// Symmetric with zero diagonal; requires >= 2 equal-length tracks.
Matrix hypothesis_divergence(const std::vector<dsp::ProsodyTrack>& tracks);

}  // namespace eval
}  // namespace vqtts

#endif  // VQTTS_EVAL_H_
