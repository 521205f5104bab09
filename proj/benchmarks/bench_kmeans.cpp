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

#include <random>

#include <benchmark/benchmark.h>

#include "vqtts/kmeans.h"
#include "vqtts/matrix.h"

namespace {

vqtts::Matrix make_data(std::size_t n, std::size_t d, uint64_t seed) {
  vqtts::Matrix m(n, d);
  std::mt19937_64 rng(seed);
  for (double& v : m.data)
    v = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 10.0;
  return m;
}

void BM_kmeans(benchmark::State& state) {
  vqtts::Matrix data = make_data(2000, 9, 7);
  int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = vqtts::kmeans::run(data, k, 10, 1);
    benchmark::DoNotOptimize(r.distortion_history.back());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(data.rows));
}
BENCHMARK(BM_kmeans)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
