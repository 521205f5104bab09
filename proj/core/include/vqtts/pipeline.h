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

#ifndef VQTTS_PIPELINE_H_
#define VQTTS_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vqtts/config.h"
#include "vqtts/eval.h"

namespace vqtts {
namespace pipeline {

// CLI-level overrides applied on top of the config file.
struct Options {
  std::optional<uint64_t> seed;
  std::optional<std::string> mode;  // "greedy" or "beam"
  std::optional<int> beam;
};

struct Failure {
  std::string id;
  std::string message;
};

// Output tag shared by decode, evaluate and export-pitch so that one
// (mode, beam) selection names the same artifact everywhere.
std::string decode_tag(const std::string& mode, int beam);

// Reads every configured split manifest, extracts prosody and mel tracks,
// normalizes prosody with train-split statistics, computes 9-dim deltas
// and writes the feature store. Utterance-level problems are recorded and
// skipped; the returned list is empty on full success.
std::vector<Failure> cmd_extract(const config::Config& cfg);

// Trains the grouped acoustic codebook on train-split mel frames, then
// quantizes every stored split and writes the dense token vocabulary.
void cmd_train_vq(const config::Config& cfg, const Options& opt);

// Trains the phoneme-level prosody codebook on train-split segment means
// and labels every stored split.
void cmd_label_prosody(const config::Config& cfg, const Options& opt);

// Trains the count-based sequence models for both decode streams
// (per-frame acoustic tokens and per-segment prosody labels).
void cmd_train_lm(const config::Config& cfg);

// Decodes the configured split with the configured stream's model, one
// record per utterance with ranked hypotheses. Lengths come from the
// stored reference sequences (the ground-truth durations).
void cmd_decode(const config::Config& cfg, const Options& opt);

// Scores a decode run against the stored references: micro-averaged token
// accuracy, and for the prosody-label stream GPE between rendered
// reference and hypothesis pitch tracks. Writes the report JSON and
// returns it.
eval::EvalReport cmd_evaluate(const config::Config& cfg, const Options& opt);

// Renders every hypothesis of one utterance to a pitch track CSV
// (frame_index, hypothesis_id, log_pitch, voiced) plus, when there are at
// least two hypotheses, a pairwise divergence matrix CSV.
void cmd_export_pitch(const config::Config& cfg, const Options& opt);

}  // namespace pipeline
}  // namespace vqtts

#endif  // VQTTS_PIPELINE_H_
