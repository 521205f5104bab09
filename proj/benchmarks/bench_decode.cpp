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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "vqtts/decode.h"

namespace {

std::vector<double> random_dist(std::mt19937_64& rng, int size) {
  std::vector<double> d(static_cast<std::size_t>(size));
  double sum = 0.0;
  for (double& v : d) {
    v = static_cast<double>(rng() >> 11) * 0x1.0p-53 + 1e-6;
    sum += v;
  }
  for (double& v : d) v /= sum;
  return d;
}

uint64_t fnv1a(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Fixed pool of distributions selected by a hash of the history, so the
// benchmark measures the decoder rather than distribution synthesis.
class PoolModel : public vqtts::decode::StepModel {
 public:
  PoolModel(uint64_t seed, int vocab, int pool) : vocab_(vocab) {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < pool; ++i) pool_.push_back(random_dist(rng, vocab));
  }

  int vocab_size() const override { return vocab_; }
  void next_dist(const std::vector<int>& history,
                 std::vector<double>& out) const override {
    std::string bytes(reinterpret_cast<const char*>(history.data()),
                      history.size() * sizeof(int));
    out = pool_[fnv1a(bytes) % pool_.size()];
  }

 private:
  int vocab_;
  std::vector<std::vector<double>> pool_;
};

constexpr int kVocab = 21500;
constexpr int kSteps = 100;

void BM_greedy_decode(benchmark::State& state) {
  PoolModel model(1, kVocab, 8);
  for (auto _ : state) {
    auto hyp = vqtts::decode::greedy_decode(model, kSteps);
    benchmark::DoNotOptimize(hyp.log_prob);
  }
  state.SetItemsProcessed(state.iterations() * kSteps);
}
BENCHMARK(BM_greedy_decode)->Unit(benchmark::kMillisecond);

void BM_beam_search(benchmark::State& state) {
  PoolModel model(1, kVocab, 8);
  int beam = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto hyps = vqtts::decode::beam_search(model, kSteps, beam);
    benchmark::DoNotOptimize(hyps[0].log_prob);
  }
  state.SetItemsProcessed(state.iterations() * kSteps);
}
BENCHMARK(BM_beam_search)->Arg(1)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
