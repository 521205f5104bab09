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

#ifndef VQTTS_PROSODY_H_
#define VQTTS_PROSODY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "vqtts/matrix.h"

namespace vqtts {
namespace prosody {

struct PhonemeSegment {
  std::string phoneme;
  int start_frame = 0;
  int end_frame = 0;  // exclusive
};

// One utterance of a forced alignment: frame count plus sorted,
// non-overlapping segments. Gaps between segments are allowed.
struct Alignment {
  std::string utt_id;
  int n_frames = 0;
  std::vector<PhonemeSegment> segments;
};

// Text format: header line "utt <id> <n_frames>", then one line per
// segment "<phoneme> <start_frame> <end_frame>".
Alignment read_alignment(const std::string& path);
void write_alignment(const std::string& path, const Alignment& ali);

// Phoneme-level codebook over 9-dim frame-averaged prosody vectors.
struct PLProsodyCodebook {
  int n = 128;
  uint64_t seed = 0;
  Matrix centroids;  // n x 9
};

// Mean of track rows [start_frame, end_frame). The track is expected to
// carry 9 columns ([p, delta p, delta^2 p] over the 3 prosody dims).
std::vector<double> phoneme_prosody(const Matrix& track9,
                                    const PhonemeSegment& seg);

// k-means over the collected 9-dim representations (M x 9 matrix), same
// engine and guarantees as the acoustic codebook training.
PLProsodyCodebook train_pl_codebook(const Matrix& reprs, int n, uint64_t seed);

// Nearest centroid, lowest index on ties.
int label(const PLProsodyCodebook& cb, const std::vector<double>& repr);

// Centroid row for a label.
std::vector<double> quantized_prosody(const PLProsodyCodebook& cb, int lab);

// Stored in the grouped codebook binary format with groups = 1.
void save_pl_codebook(const std::string& path, const PLProsodyCodebook& cb);
PLProsodyCodebook load_pl_codebook(const std::string& path);

}  // namespace prosody
}  // namespace vqtts

#endif  // VQTTS_PROSODY_H_
