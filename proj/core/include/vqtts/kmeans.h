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

#ifndef VQTTS_KMEANS_H_
#define VQTTS_KMEANS_H_

#include <cstdint>
#include <vector>

#include "vqtts/matrix.h"

namespace vqtts {
namespace kmeans {

struct Result {
  Matrix centroids;             // k x D
  std::vector<int> assignments; // length N
  // Total squared distortion measured after each assignment step, against
  // the centroids used for that assignment. Non-increasing by construction.
  std::vector<double> distortion_history;
};

// Lloyd's algorithm with k-means++ initialization.
//  - Seeded and fully deterministic: identical (data, k, seed) gives a
//    bit-identical result. Random draws use an internal 53-bit uniform
//    helper rather than std distributions so the stream is stable.
//  - Assignment ties break to the lowest centroid index.
//  - A cluster left empty after an update step is re-seeded to the point
//    currently farthest from its assigned centroid (repeated for multiple
//    empties, skipping points already taken).
//  - Stops when assignments are unchanged or after max_iters iterations.
// Throws "insufficient data" when N < k.
Result run(const Matrix& data, int k, int max_iters, uint64_t seed);

// Index of the nearest row of `centroids` under squared Euclidean
// distance, lowest index on ties.
int nearest(const Matrix& centroids, const double* point);

}  // namespace kmeans
}  // namespace vqtts

#endif  // VQTTS_KMEANS_H_
