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

#ifndef VQTTS_STORE_H_
#define VQTTS_STORE_H_

#include <string>
#include <vector>

#include "vqtts/dsp.h"
#include "vqtts/matrix.h"
#include "vqtts/prosody.h"

namespace vqtts {
namespace store {

struct ManifestEntry {
  std::string id;
  std::string wav_path;
  std::string alignment_path;
};

// Tab-separated lines `id<TAB>wav_path<TAB>alignment_path`; `#` comments
// and blank lines allowed. Ids must be unique and referenced files must
// exist. An entry-less manifest raises "empty manifest".
std::vector<ManifestEntry> read_manifest(const std::string& path);

// One utterance's extracted features. Tracks are frame-aligned; tokens
// (one per frame) and labels (one per segment) stay empty until the
// quantization and labelling stages fill them in.
struct Record {
  std::string id;
  dsp::ProsodyTrack prosody;
  Matrix delta9;
  Matrix mel;
  std::vector<int> tokens;
  std::vector<int> labels;
  std::vector<prosody::PhonemeSegment> segments;
};

// A split is persisted as <dir>/<split>.jsonl (per-utterance metadata,
// token/label sequences, track shapes and sidecar offsets) plus
// <dir>/<split>.f32 (all track payloads as little-endian f32). Writing is
// deterministic: same records, same bytes.
void save_split(const std::string& dir, const std::string& split,
                const std::vector<Record>& records);
std::vector<Record> load_split(const std::string& dir,
                               const std::string& split);
bool split_exists(const std::string& dir, const std::string& split);

void save_stats(const std::string& dir, const dsp::NormStats& stats);
dsp::NormStats load_stats(const std::string& dir);

}  // namespace store
}  // namespace vqtts

#endif  // VQTTS_STORE_H_
