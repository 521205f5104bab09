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

#ifndef VQTTS_VQ_H_
#define VQTTS_VQ_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "vqtts/matrix.h"

namespace vqtts {
namespace vq {

// Grouped codebook: the feature dimension D is split into `groups` equal
// slices, each quantized against its own set of `entries_per_group`
// centroids.
struct Codebook {
  int groups = 2;
  int entries_per_group = 0;
  int dim = 0;
  uint32_t version = 1;
  uint64_t seed = 0;
  std::vector<Matrix> centroids;  // per group: V x (D/groups)

  int group_dim() const { return dim / groups; }
};

struct GroupedToken {
  std::vector<int> indices;  // one per group, each in [0, V)
};

// combined_id = sum_g indices[g] * V^(groups-1-g)
int64_t combined_id(const Codebook& cb, const GroupedToken& tok);
GroupedToken token_from_combined(const Codebook& cb, int64_t id);

// Trains per-group k-means codebooks on row slices of `frames` (N x D).
// Per-group runs are seeded with seed + group index. Throws
// "insufficient data" when N < V and rejects D not divisible by G.
Codebook train_codebook(const Matrix& frames, int groups, int entries_per_group,
                        int max_iters, uint64_t seed);

// Nearest centroid per group by squared Euclidean distance, lowest index
// on ties. `frame` must have length cb.dim.
GroupedToken quantize(const Codebook& cb, const double* frame);
GroupedToken quantize(const Codebook& cb, const std::vector<double>& frame);

// Concatenation of the selected per-group centroids.
std::vector<double> dequantize(const Codebook& cb, const GroupedToken& tok);

// Closed vocabulary over the combined ids actually observed in a corpus.
// Dense ids are assigned in first-occurrence order; the BOS id is
// size(), one past the last observed id.
struct TokenVocabulary {
  std::vector<int64_t> combined_ids;            // dense id -> combined id
  std::unordered_map<int64_t, int> dense_ids;   // combined id -> dense id

  int size() const { return static_cast<int>(combined_ids.size()); }
  int bos_id() const { return size(); }
  // Dense id for a combined id, or -1 when unseen.
  int dense(int64_t combined) const {
    auto it = dense_ids.find(combined);
    return it == dense_ids.end() ? -1 : it->second;
  }
};

TokenVocabulary build_vocabulary(const std::vector<int64_t>& combined_stream);

// Binary codebook file: magic "VQCB", then u32 little-endian version,
// groups, entries_per_group, dim, then per group V x (D/G) centroids as
// f32 little-endian row-major, then u64 seed.
void save_codebook(const std::string& path, const Codebook& cb);
Codebook load_codebook(const std::string& path);

// Vocabulary file: a JSON array of combined ids in dense-id order.
void save_vocabulary(const std::string& path, const TokenVocabulary& vocab);
TokenVocabulary load_vocabulary(const std::string& path);

}  // namespace vq
}  // namespace vqtts

#endif  // VQTTS_VQ_H_
