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

#include "vqtts/decode.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace vqtts {
namespace decode {
namespace {

void validate_dist(const std::vector<double>& dist, int vocab) {
  if (static_cast<int>(dist.size()) != vocab)
    throw std::runtime_error("model distribution invalid");
  double sum = 0.0;
  for (double p : dist) {
    if (!(p >= 0.0)) throw std::runtime_error("model distribution invalid");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw std::runtime_error("model distribution invalid");
}

struct ClassProb {
  int id;
  double p;
};

// Top k of dist over ids [0, limit), ordered by descending probability
// with lower ids first on ties. Partial selection with a size-k heap.
std::vector<ClassProb> top_classes(const std::vector<double>& dist, int limit,
                                   int k) {
  auto better = [](const ClassProb& a, const ClassProb& b) {
    return a.p > b.p || (a.p == b.p && a.id < b.id);
  };
  // With `better` as the comparator the heap top is the worst kept entry.
  std::priority_queue<ClassProb, std::vector<ClassProb>, decltype(better)> keep(
      better);
  for (int id = 0; id < limit; ++id) {
    ClassProb c{id, dist[static_cast<std::size_t>(id)]};
    if (static_cast<int>(keep.size()) < k) {
      keep.push(c);
    } else if (better(c, keep.top())) {
      keep.pop();
      keep.push(c);
    }
  }
  std::vector<ClassProb> out(keep.size());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = keep.top();
    keep.pop();
  }
  return out;
}

}  // namespace

Hypothesis greedy_decode(const StepModel& model, int length) {
  if (length < 1) throw std::invalid_argument("length must be >= 1");
  int vocab = model.vocab_size();
  if (vocab < 2) throw std::invalid_argument("vocabulary too small");
  int bos = vocab - 1;

  Hypothesis hyp;
  hyp.tokens.push_back(bos);
  std::vector<double> dist;
  for (int step = 0; step < length; ++step) {
    model.next_dist(hyp.tokens, dist);
    validate_dist(dist, vocab);
    int best = 0;
    for (int id = 1; id < bos; ++id)
      if (dist[static_cast<std::size_t>(id)] >
          dist[static_cast<std::size_t>(best)])
        best = id;
    hyp.tokens.push_back(best);
    hyp.log_prob += std::log(dist[static_cast<std::size_t>(best)]);
  }
  return hyp;
}

std::vector<Hypothesis> beam_search(const StepModel& model, int length,
                                    int beam) {
  if (length < 1) throw std::invalid_argument("length must be >= 1");
  if (beam < 1) throw std::invalid_argument("beam must be >= 1");
  int vocab = model.vocab_size();
  if (vocab < 2) throw std::invalid_argument("vocabulary too small");
  int bos = vocab - 1;
  int emittable = vocab - 1;

  std::vector<Hypothesis> chain;
  chain.push_back(Hypothesis{{bos}, 0.0});

  std::vector<double> dist;
  for (int step = 0; step < length; ++step) {
    int m = static_cast<int>(chain.size());
    std::vector<std::vector<ClassProb>> tops(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      model.next_dist(chain[static_cast<std::size_t>(i)].tokens, dist);
      validate_dist(dist, vocab);
      tops[static_cast<std::size_t>(i)] =
          top_classes(dist, emittable, std::min(beam, emittable));
    }

    struct Cand {
      double lp;
      int hyp;
      int rank;
    };
    auto cls = [&](const Cand& c) {
      return tops[static_cast<std::size_t>(c.hyp)]
                 [static_cast<std::size_t>(c.rank)].id;
    };
    // True when a expands to a lexicographically smaller sequence than b.
    auto lex_before = [&](const Cand& a, const Cand& b) {
      const auto& ta = chain[static_cast<std::size_t>(a.hyp)].tokens;
      const auto& tb = chain[static_cast<std::size_t>(b.hyp)].tokens;
      for (std::size_t i = 0; i < ta.size(); ++i)
        if (ta[i] != tb[i]) return ta[i] < tb[i];
      return cls(a) < cls(b);
    };
    // Heap comparator: a sorts below b when b has higher log-prob, or on
    // an exact tie when b's sequence is lexicographically smaller.
    auto below = [&](const Cand& a, const Cand& b) {
      if (a.lp != b.lp) return a.lp < b.lp;
      return lex_before(b, a);
    };
    std::priority_queue<Cand, std::vector<Cand>, decltype(below)> heap(below);

    auto push = [&](int i, int r) {
      if (i >= m) return;
      if (r >= static_cast<int>(tops[static_cast<std::size_t>(i)].size()))
        return;
      const ClassProb& c =
          tops[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
      heap.push(Cand{chain[static_cast<std::size_t>(i)].log_prob +
                         std::log(c.p),
                     i, r});
    };

    std::vector<Hypothesis> next;
    next.reserve(static_cast<std::size_t>(beam));
    // Level j may draw on expansions (hyp i, class rank r) with
    // max(i + 1, r + 1) <= j; push each expansion at the first level
    // where it becomes eligible, then commit the best per level.
    for (int j = 1; j <= beam; ++j) {
      for (int r = 0; r < j; ++r) push(j - 1, r);
      for (int i = 0; i + 1 < j; ++i) push(i, j - 1);
      if (heap.empty()) break;
      Cand best = heap.top();
      heap.pop();
      Hypothesis h = chain[static_cast<std::size_t>(best.hyp)];
      h.tokens.push_back(cls(best));
      h.log_prob = best.lp;
      next.push_back(std::move(h));
    }
    chain = std::move(next);
  }

  std::sort(chain.begin(), chain.end(),
            [](const Hypothesis& a, const Hypothesis& b) {
              if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
              return a.tokens < b.tokens;
            });
  return chain;
}

MarkovModel::MarkovModel(int order, double lambda, int vocab_size)
    : order_(order), lambda_(lambda), vocab_(vocab_size) {
  if (order_ < 1) throw std::invalid_argument("order must be >= 1");
  if (!(lambda_ > 0.0)) throw std::invalid_argument("lambda must be > 0");
  if (vocab_ < 2) throw std::invalid_argument("vocabulary too small");
}

void MarkovModel::observe(const std::vector<int>& sequence) {
  int bos = vocab_ - 1;
  std::vector<int> key(static_cast<std::size_t>(order_), bos);
  for (int tok : sequence) {
    if (tok < 0 || tok >= bos)
      throw std::invalid_argument("token out of range");
    ++counts_[key][tok];
    key.erase(key.begin());
    key.push_back(tok);
  }
}

void MarkovModel::next_dist(const std::vector<int>& history,
                            std::vector<double>& out) const {
  int bos = vocab_ - 1;
  std::vector<int> key(static_cast<std::size_t>(order_), bos);
  std::size_t take = std::min(history.size(), static_cast<std::size_t>(order_));
  for (std::size_t i = 0; i < take; ++i)
    key[static_cast<std::size_t>(order_) - take + i] =
        history[history.size() - take + i];

  out.assign(static_cast<std::size_t>(vocab_), 0.0);
  auto it = counts_.find(key);
  int64_t total = 0;
  if (it != counts_.end())
    for (const auto& [tok, c] : it->second) total += c;
  double denom = static_cast<double>(total) + lambda_ * vocab_;
  double base = lambda_ / denom;
  for (double& p : out) p = base;
  if (it != counts_.end())
    for (const auto& [tok, c] : it->second)
      out[static_cast<std::size_t>(tok)] =
          (lambda_ + static_cast<double>(c)) / denom;
}

void MarkovModel::save(const std::string& path) const {
  nlohmann::json j;
  j["order"] = order_;
  j["lambda"] = lambda_;
  j["vocab_size"] = vocab_;
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [key, row] : counts_) {
    std::ostringstream ks;
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (i) ks << ",";
      ks << key[i];
    }
    nlohmann::json jrow = nlohmann::json::object();
    for (const auto& [tok, c] : row) jrow[std::to_string(tok)] = c;
    counts[ks.str()] = std::move(jrow);
  }
  j["counts"] = std::move(counts);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model: " + path);
  out << j.dump() << "\n";
}

MarkovModel MarkovModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  MarkovModel model(j.at("order").get<int>(), j.at("lambda").get<double>(),
                    j.at("vocab_size").get<int>());
  for (const auto& [kstr, row] : j.at("counts").items()) {
    std::vector<int> key;
    std::istringstream ks(kstr);
    std::string part;
    while (std::getline(ks, part, ',')) key.push_back(std::stoi(part));
    if (static_cast<int>(key.size()) != model.order_)
      throw std::runtime_error("bad history key in model: " + path);
    auto& dest = model.counts_[key];
    for (const auto& [tstr, c] : row.items())
      dest[std::stoi(tstr)] = c.get<int64_t>();
  }
  return model;
}

MarkovModel train_markov(const std::vector<std::vector<int>>& sequences,
                         int order, double lambda, int vocab_size) {
  if (sequences.empty()) throw std::invalid_argument("empty corpus");
  MarkovModel model(order, lambda, vocab_size);
  for (const auto& seq : sequences) model.observe(seq);
  return model;
}

void PrimedModel::next_dist(const std::vector<int>& history,
                            std::vector<double>& out) const {
  std::vector<int> effective;
  effective.reserve(1 + context_.size() + (history.empty() ? 0 : history.size() - 1));
  effective.push_back(history.empty() ? vocab_size() - 1 : history.front());
  effective.insert(effective.end(), context_.begin(), context_.end());
  if (!history.empty())
    effective.insert(effective.end(), history.begin() + 1, history.end());
  base_.next_dist(effective, out);
}

}  // namespace decode
}  // namespace vqtts
