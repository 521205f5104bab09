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

#ifndef VQTTS_DECODE_H_
#define VQTTS_DECODE_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace vqtts {
namespace decode {

// One autoregressive step model. vocab_size includes the reserved BOS
// token, which is always id vocab_size - 1. next_dist fills `out` with a
// probability vector over all vocab_size ids given the BOS-initial token
// history; it must sum to 1 and be non-negative (the decoders check this
// to 1e-6 and reject the model otherwise). Implementations must be safe
// to share read-only across threads.
class StepModel {
 public:
  virtual ~StepModel() = default;
  virtual int vocab_size() const = 0;
  virtual void next_dist(const std::vector<int>& history,
                         std::vector<double>& out) const = 0;
};

struct Hypothesis {
  std::vector<int> tokens;  // BOS-initial; BOS is never re-emitted
  double log_prob = 0.0;    // natural log, accumulated per step
};

// Emits `length` tokens, each the argmax of the step distribution over
// non-BOS ids with ties broken to the lowest id.
Hypothesis greedy_decode(const StepModel& model, int length);

// Beam search over non-BOS ids, exploring the top `beam` classes of each
// live hypothesis per step. The search is anytime-consistent across beam
// widths: the first k levels of the internal expansion chain are
// identical for every beam >= k, which makes the best returned log_prob
// non-decreasing in the beam size and makes beam = 1 reproduce
// greedy_decode bit-for-bit. Hypotheses are pairwise distinct. The
// returned list (at most `beam` entries) is sorted by descending
// log_prob, ties broken by lexicographically smaller token sequence.
// Each step evaluates exactly one step distribution per live hypothesis
// and selects top classes by partial selection, so large vocabularies are
// never fully sorted.
std::vector<Hypothesis> beam_search(const StepModel& model, int length,
                                    int beam);

// Count-based n-gram model with additive smoothing:
//   P(t | h) = (count(h, t) + lambda) / (total(h) + lambda * vocab_size).
// Histories are padded with BOS on the left. Unseen histories therefore
// give the exactly uniform distribution.
class MarkovModel : public StepModel {
 public:
  MarkovModel(int order, double lambda, int vocab_size);

  int vocab_size() const override { return vocab_; }
  void next_dist(const std::vector<int>& history,
                 std::vector<double>& out) const override;

  // Adds one training sequence of emitted (non-BOS) token ids.
  void observe(const std::vector<int>& sequence);

  int order() const { return order_; }
  double lambda() const { return lambda_; }

  void save(const std::string& path) const;
  static MarkovModel load(const std::string& path);

 private:
  int order_;
  double lambda_;
  int vocab_;
  std::map<std::vector<int>, std::map<int, int64_t>> counts_;
};

MarkovModel train_markov(const std::vector<std::vector<int>>& sequences,
                         int order, double lambda, int vocab_size);

// Wraps a model with fixed per-utterance conditioning tokens that are
// treated as history preceding everything the decoder emits. The decoder
// still starts from bare BOS; the context only affects scoring.
class PrimedModel : public StepModel {
 public:
  PrimedModel(const StepModel& base, std::vector<int> context)
      : base_(base), context_(std::move(context)) {}

  int vocab_size() const override { return base_.vocab_size(); }
  void next_dist(const std::vector<int>& history,
                 std::vector<double>& out) const override;

 private:
  const StepModel& base_;
  std::vector<int> context_;
};

}  // namespace decode
}  // namespace vqtts

#endif  // VQTTS_DECODE_H_
