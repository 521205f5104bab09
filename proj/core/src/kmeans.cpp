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

#include "vqtts/kmeans.h"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace vqtts {
namespace kmeans {
namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sqdist(const double* a, const double* b, std::size_t d) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace

int nearest(const Matrix& centroids, const double* point) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < centroids.rows; ++j) {
    double d = sqdist(centroids.row(j), point, centroids.cols);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(j);
    }
  }
  return best;
}

Result run(const Matrix& data, int k, int max_iters, uint64_t seed) {
  std::size_t n = data.rows, d = data.cols;
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (n < static_cast<std::size_t>(k))
    throw std::runtime_error("insufficient data");

  std::mt19937_64 rng(seed);
  Matrix centroids(static_cast<std::size_t>(k), d);

  // k-means++ seeding: first centre uniform, then D^2-weighted draws.
  std::size_t first = static_cast<std::size_t>(uniform01(rng) * n);
  if (first >= n) first = n - 1;
  for (std::size_t c = 0; c < d; ++c) centroids.at(0, c) = data.at(first, c);

  std::vector<double> min_d(n);
  for (std::size_t i = 0; i < n; ++i)
    min_d[i] = sqdist(data.row(i), centroids.row(0), d);

  for (int j = 1; j < k; ++j) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += min_d[i];
    std::size_t pick;
    if (total <= 0.0) {
      pick = static_cast<std::size_t>(uniform01(rng) * n);
      if (pick >= n) pick = n - 1;
    } else {
      double target = uniform01(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += min_d[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    }
    for (std::size_t c = 0; c < d; ++c)
      centroids.at(static_cast<std::size_t>(j), c) = data.at(pick, c);
    for (std::size_t i = 0; i < n; ++i) {
      double dist =
          sqdist(data.row(i), centroids.row(static_cast<std::size_t>(j)), d);
      if (dist < min_d[i]) min_d[i] = dist;
    }
  }

  Result res;
  res.assignments.assign(n, -1);
  std::vector<int> prev(n, -1);
  std::vector<double> point_dist(n, 0.0);

  for (int iter = 0; iter < max_iters; ++iter) {
    double distortion = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      int a = nearest(centroids, data.row(i));
      res.assignments[i] = a;
      point_dist[i] =
          sqdist(data.row(i), centroids.row(static_cast<std::size_t>(a)), d);
      distortion += point_dist[i];
    }
    res.distortion_history.push_back(distortion);
    if (res.assignments == prev) break;
    prev = res.assignments;

    std::vector<double> acc(static_cast<std::size_t>(k) * d, 0.0);
    std::vector<std::size_t> count(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t a = static_cast<std::size_t>(res.assignments[i]);
      for (std::size_t c = 0; c < d; ++c) acc[a * d + c] += data.at(i, c);
      ++count[a];
    }
    std::vector<uint8_t> taken(n, 0);
    for (int j = 0; j < k; ++j) {
      std::size_t ju = static_cast<std::size_t>(j);
      if (count[ju] > 0) {
        for (std::size_t c = 0; c < d; ++c)
          centroids.at(ju, c) = acc[ju * d + c] / static_cast<double>(count[ju]);
      } else {
        // Re-seed an empty cluster at the current worst-fit point.
        std::size_t worst = 0;
        double worst_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (taken[i]) continue;
          if (point_dist[i] > worst_d) {
            worst_d = point_dist[i];
            worst = i;
          }
        }
        taken[worst] = 1;
        for (std::size_t c = 0; c < d; ++c)
          centroids.at(ju, c) = data.at(worst, c);
      }
    }
  }

  res.centroids = std::move(centroids);
  return res;
}

}  // namespace kmeans
}  // namespace vqtts
