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

// Release gate. Each check below guards one behavioural guarantee the kit
// ships with, from decoder ordering invariants down to byte-level pipeline
// determinism. One line is printed per check; the process exits nonzero if
// any of them fail. Run it directly or through ctest.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vqtts/config.h"
#include "vqtts/decode.h"
#include "vqtts/dsp.h"
#include "vqtts/eval.h"
#include "vqtts/kmeans.h"
#include "vqtts/matrix.h"
#include "vqtts/pipeline.h"
#include "vqtts/wav.h"

#include "test_corpus.h"
#include "test_util.h"

namespace {

using vqtts::Matrix;
using vqtts::decode::beam_search;
using vqtts::decode::greedy_decode;
using vqtts::decode::Hypothesis;
using vqtts::decode::StepModel;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    auto d = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration<double>(d).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct Gate {
  int failed = 0;

  void report(const char* name, bool ok, double seconds, double limit,
              const std::string& detail) {
    bool in_time = limit <= 0.0 || seconds < limit;
    bool pass = ok && in_time;
    if (!pass) ++failed;
    if (limit > 0.0)
      std::printf("[%s] %s (%.2fs, limit %.0fs)\n", pass ? "PASS" : "FAIL",
                  name, seconds, limit);
    else
      std::printf("[%s] %s (%.2fs)\n", pass ? "PASS" : "FAIL", name, seconds);
    if (!pass && !detail.empty())
      std::printf("       %s\n", detail.c_str());
    std::fflush(stdout);
  }

  void run(const char* name, double limit,
           bool (*fn)(std::string* detail)) {
    std::string detail;
    bool ok = false;
    Timer t;
    try {
      ok = fn(&detail);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    report(name, ok, t.seconds(), limit, detail);
  }
};

// Deterministic random step model: the distribution is a pure function of
// (seed, history), so repeated queries along a decoding path always agree.
class HashModel : public StepModel {
 public:
  HashModel(uint64_t seed, int vocab) : seed_(seed), vocab_(vocab) {}

  int vocab_size() const override { return vocab_; }
  void next_dist(const std::vector<int>& history,
                 std::vector<double>& out) const override {
    std::string bytes(reinterpret_cast<const char*>(history.data()),
                      history.size() * sizeof(int));
    std::mt19937_64 rng(seed_ ^ testutil::fnv1a(bytes));
    out = testutil::random_dist(rng, vocab_);
  }

 private:
  uint64_t seed_;
  int vocab_;
};

// 1. Widening the beam never lowers the best score, and beam 1 reproduces
//    greedy decoding exactly, across randomized models.
bool check_beam_dominance(std::string* detail) {
  std::mt19937_64 meta(20260501);
  for (int m = 0; m < 200; ++m) {
    int vocab = 3 + static_cast<int>(testutil::uniform01(meta) * 14.0);
    int length = 1 + static_cast<int>(testutil::uniform01(meta) * 8.0);
    HashModel model(meta(), vocab);

    Hypothesis g = greedy_decode(model, length);
    double prev = -std::numeric_limits<double>::infinity();
    for (int beam : {1, 2, 5, 10}) {
      std::vector<Hypothesis> hyps = beam_search(model, length, beam);
      if (hyps.empty()) {
        *detail = "beam search returned no hypotheses";
        return false;
      }
      if (beam == 1 &&
          (hyps[0].tokens != g.tokens || hyps[0].log_prob != g.log_prob)) {
        *detail = "beam 1 differs from greedy (model " + std::to_string(m) +
                  ", vocab " + std::to_string(vocab) + ", length " +
                  std::to_string(length) + ")";
        return false;
      }
      if (hyps[0].log_prob < prev) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "best score dropped at beam %d: %.12f -> %.12f "
                      "(model %d, vocab %d, length %d)",
                      beam, prev, hyps[0].log_prob, m, vocab, length);
        *detail = buf;
        return false;
      }
      prev = hyps[0].log_prob;
    }
  }
  return true;
}

// 2. With the beam wide enough to hold every sequence, the top hypothesis
//    must match brute-force enumeration of the whole space.
bool check_exhaustive_oracle(std::string* detail) {
  std::mt19937_64 meta(918273645);
  for (int m = 0; m < 50; ++m) {
    int length = 1 + static_cast<int>(testutil::uniform01(meta) * 5.0);
    HashModel model(meta(), 4);

    int leaves = 1;
    for (int i = 0; i < length; ++i) leaves *= 3;

    std::vector<int> best_tokens;
    double best_lp = -std::numeric_limits<double>::infinity();
    std::vector<int> prefix{3};
    std::vector<double> dist;
    auto walk = [&](auto&& self, double lp) -> void {
      if (static_cast<int>(prefix.size()) == length + 1) {
        if (lp > best_lp) {
          best_lp = lp;
          best_tokens = prefix;
        }
        return;
      }
      model.next_dist(prefix, dist);
      std::vector<double> local = dist;
      for (int id = 0; id < 3; ++id) {
        prefix.push_back(id);
        self(self, lp + std::log(local[static_cast<std::size_t>(id)]));
        prefix.pop_back();
      }
    };
    walk(walk, 0.0);

    std::vector<Hypothesis> hyps = beam_search(model, length, leaves);
    if (static_cast<int>(hyps.size()) != leaves) {
      *detail = "saturated beam returned " + std::to_string(hyps.size()) +
                " of " + std::to_string(leaves) + " sequences";
      return false;
    }
    if (hyps[0].tokens != best_tokens ||
        std::fabs(hyps[0].log_prob - best_lp) > 1e-9) {
      char buf[120];
      std::snprintf(buf, sizeof(buf),
                    "top hypothesis disagrees with enumeration "
                    "(model %d, length %d, %.12f vs %.12f)",
                    m, length, hyps[0].log_prob, best_lp);
      *detail = buf;
      return false;
    }
  }
  return true;
}

// Synthetic generator for the structural check: a 12-token cycle that a
// greedy decoder follows, plus a distractor block whose single-step argmax
// baits it away from the cycle. Order-1 by construction; the trained model
// uses order 2 and must recover the same structure.
struct CorpusGenerator {
  static constexpr int kEmit = 32;
  static constexpr int kBos = 32;
  std::array<std::array<double, kEmit>, kEmit + 1> rows{};

  CorpusGenerator() {
    for (int s = 0; s < 12; ++s) {
      auto& r = rows[static_cast<std::size_t>(s)];
      if (s == 11) {
        r[27] = 0.55;
        r[0] = 0.42;
        for (int d = 12; d < kEmit; ++d)
          if (d != 27) r[static_cast<std::size_t>(d)] += 0.03 / 19.0;
      } else {
        r[static_cast<std::size_t>(s + 1)] = 0.97;
        for (int d = 12; d < kEmit; ++d)
          r[static_cast<std::size_t>(d)] += 0.03 / 20.0;
      }
    }
    for (int d = 12; d < kEmit; ++d) {
      auto& r = rows[static_cast<std::size_t>(d)];
      r[0] = 0.13;
      for (int o = 12; o < kEmit; ++o)
        if (o != d) r[static_cast<std::size_t>(o)] = 0.87 / 19.0;
    }
    for (int s = 0; s < 12; ++s)
      rows[kBos][static_cast<std::size_t>(s)] = 1.0 / 12.0;
  }

  int draw(int last, std::mt19937_64& rng) const {
    const auto& r = rows[static_cast<std::size_t>(last)];
    double u = testutil::uniform01(rng);
    double acc = 0.0;
    int fallback = 0;
    for (int t = 0; t < kEmit; ++t) {
      if (r[static_cast<std::size_t>(t)] <= 0.0) continue;
      fallback = t;
      acc += r[static_cast<std::size_t>(t)];
      if (u < acc) return t;
    }
    return fallback;
  }

  std::vector<std::vector<int>> sample(int n, std::mt19937_64& rng) const {
    std::vector<std::vector<int>> seqs;
    seqs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      int len = 20 + static_cast<int>(testutil::uniform01(rng) * 11.0);
      std::vector<int> s;
      s.reserve(static_cast<std::size_t>(len));
      int last = kBos;
      for (int t = 0; t < len; ++t) {
        last = draw(last, rng);
        s.push_back(last);
      }
      seqs.push_back(std::move(s));
    }
    return seqs;
  }
};

// 3. Scaled-down structural replication: on a synthetic Markov corpus the
//    wider beams must match or beat greedy token accuracy, and the beam-10
//    top hypothesis must out-score greedy on nearly every sequence.
bool check_markov_replication(std::string* detail) {
  CorpusGenerator gen;
  std::mt19937_64 rng(424242);
  std::vector<std::vector<int>> train = gen.sample(5000, rng);
  std::vector<std::vector<int>> test = gen.sample(500, rng);

  vqtts::decode::MarkovModel model =
      vqtts::decode::train_markov(train, 2, 0.1, CorpusGenerator::kEmit + 1);

  int64_t total = 0;
  int64_t hit_g = 0, hit_5 = 0, hit_10 = 0;
  int strict = 0;
  int n_used = 0;
  for (const auto& s : test) {
    int rest = static_cast<int>(s.size()) - 2;
    if (rest < 1) continue;
    ++n_used;

    vqtts::decode::PrimedModel primed(model, {s[0], s[1]});
    Hypothesis g = greedy_decode(primed, rest);
    std::vector<Hypothesis> b5 = beam_search(primed, rest, 5);
    std::vector<Hypothesis> b10 = beam_search(primed, rest, 10);

    auto score = [&](const Hypothesis& h, int64_t& hits) {
      for (int i = 0; i < rest; ++i)
        if (h.tokens[static_cast<std::size_t>(i) + 1] ==
            s[static_cast<std::size_t>(i) + 2])
          ++hits;
    };
    score(g, hit_g);
    score(b5[0], hit_5);
    score(b10[0], hit_10);
    total += rest;
    if (b10[0].log_prob > g.log_prob + 1e-12) ++strict;
  }

  double acc_g = static_cast<double>(hit_g) / static_cast<double>(total);
  double acc_5 = static_cast<double>(hit_5) / static_cast<double>(total);
  double acc_10 = static_cast<double>(hit_10) / static_cast<double>(total);
  double strict_frac = static_cast<double>(strict) / n_used;

  bool ok = n_used == 500 && acc_10 + 1e-12 >= acc_5 &&
            acc_5 + 1e-12 >= acc_g - 0.005 && strict_frac >= 0.99;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "accuracy greedy %.4f, beam5 %.4f, beam10 %.4f; "
                "beam10 strictly better on %.1f%% of %d sequences",
                acc_g, acc_5, acc_10, 100.0 * strict_frac, n_used);
  *detail = buf;
  return ok;
}

// 4. Clustering: monotone distortion, exact recovery of well-separated
//    blobs, and bit-identical reruns for a fixed seed.
bool check_kmeans(std::string* detail) {
  namespace kmeans = vqtts::kmeans;
  std::mt19937_64 meta(5150);

  for (int t = 0; t < 100; ++t) {
    int n = 20 + static_cast<int>(testutil::uniform01(meta) * 181.0);
    int d = 1 + static_cast<int>(testutil::uniform01(meta) * 8.0);
    int k = 1 + static_cast<int>(testutil::uniform01(meta) * 12.0);
    if (k > n) k = n;
    Matrix data(static_cast<std::size_t>(n), static_cast<std::size_t>(d));
    for (double& v : data.data) v = testutil::uniform01(meta) * 10.0;

    kmeans::Result r = kmeans::run(data, k, 25, meta());
    if (r.distortion_history.empty()) {
      *detail = "empty distortion history";
      return false;
    }
    for (std::size_t i = 1; i < r.distortion_history.size(); ++i) {
      if (r.distortion_history[i] > r.distortion_history[i - 1] + 1e-12) {
        char buf[120];
        std::snprintf(buf, sizeof(buf),
                      "distortion rose on dataset %d at iteration %zu "
                      "(%.12g -> %.12g)",
                      t, i, r.distortion_history[i - 1],
                      r.distortion_history[i]);
        *detail = buf;
        return false;
      }
    }
  }

  const int per_blob = 100;
  const int dims = 3;
  Matrix blobs(2 * per_blob, dims);
  std::array<std::array<double, dims>, 2> mean{};
  for (int b = 0; b < 2; ++b) {
    double center = b == 0 ? 0.0 : 10.0;
    for (int i = 0; i < per_blob; ++i) {
      double* row = blobs.row(static_cast<std::size_t>(b * per_blob + i));
      for (int j = 0; j < dims; ++j) {
        row[j] = center + testutil::uniform01(meta) - 0.5;
        mean[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)] +=
            row[j] / per_blob;
      }
    }
  }
  kmeans::Result two = kmeans::run(blobs, 2, 50, 99);
  std::array<bool, 2> matched{};
  for (int c = 0; c < 2; ++c) {
    const double* row = two.centroids.row(static_cast<std::size_t>(c));
    int blob = row[0] < 5.0 ? 0 : 1;
    double worst = 0.0;
    for (int j = 0; j < dims; ++j)
      worst = std::max(worst,
                       std::fabs(row[j] - mean[static_cast<std::size_t>(
                                     blob)][static_cast<std::size_t>(j)]));
    if (worst >= 1e-6) {
      char buf[100];
      std::snprintf(buf, sizeof(buf),
                    "blob centroid off by %.3g (want < 1e-6)", worst);
      *detail = buf;
      return false;
    }
    matched[static_cast<std::size_t>(blob)] = true;
  }
  if (!matched[0] || !matched[1]) {
    *detail = "both centroids landed on the same blob";
    return false;
  }

  kmeans::Result a = kmeans::run(blobs, 5, 30, 1234);
  kmeans::Result b = kmeans::run(blobs, 5, 30, 1234);
  if (!(a.centroids == b.centroids) || a.assignments != b.assignments ||
      a.distortion_history != b.distortion_history) {
    *detail = "reruns with a fixed seed are not bit-identical";
    return false;
  }
  return true;
}

// 5. Pitch tracking: synthetic tones recovered within 2 Hz on at least 95%
//    of voiced frames, and silence never flagged voiced.
bool check_pitch(std::string* detail) {
  vqtts::dsp::FrameSpec spec;
  vqtts::dsp::PitchRange range{60.0, 500.0};

  for (double f : {110.0, 220.0, 440.0}) {
    vqtts::Waveform wave = testutil::make_tone(f, 1.0, 16000);
    vqtts::dsp::ProsodyTrack track =
        vqtts::dsp::extract_prosody(wave, spec, range, 0.3);
    std::size_t voiced = 0, within = 0;
    for (std::size_t t = 0; t < track.frames.rows; ++t) {
      if (!track.voiced[t]) continue;
      ++voiced;
      double hz = std::exp(track.frames.at(t, 0));
      if (std::fabs(hz - f) <= 2.0) ++within;
    }
    if (voiced < track.frames.rows / 2) {
      char buf[100];
      std::snprintf(buf, sizeof(buf), "%.0f Hz tone: only %zu/%zu frames voiced",
                    f, voiced, track.frames.rows);
      *detail = buf;
      return false;
    }
    if (static_cast<double>(within) < 0.95 * static_cast<double>(voiced)) {
      char buf[120];
      std::snprintf(buf, sizeof(buf),
                    "%.0f Hz tone: %zu of %zu voiced frames within 2 Hz",
                    f, within, voiced);
      *detail = buf;
      return false;
    }
  }

  vqtts::Waveform silence;
  silence.samples.assign(8000, 0.0);
  vqtts::dsp::ProsodyTrack track =
      vqtts::dsp::extract_prosody(silence, spec, range, 0.3);
  for (std::size_t t = 0; t < track.frames.rows; ++t) {
    if (track.voiced[t] || track.frames.at(t, 2) > 0.3) {
      *detail = "silence produced a voiced frame";
      return false;
    }
  }
  return true;
}

vqtts::dsp::ProsodyTrack track_from_hz(const std::vector<double>& hz) {
  vqtts::dsp::ProsodyTrack tr;
  tr.frames = Matrix(hz.size(), 3);
  tr.voiced.assign(hz.size(), 1);
  for (std::size_t t = 0; t < hz.size(); ++t) {
    tr.frames.at(t, 0) = std::log(hz[t]);
    tr.frames.at(t, 2) = 1.0;
  }
  return tr;
}

// 6. Gross pitch error: an exact hand case, a zero case, and invariance of
//    the relative threshold under doubling both tracks.
bool check_gpe(std::string* detail) {
  std::vector<double> ref_hz(10, 200.0);
  std::vector<double> hyp_hz(10, 200.0);
  hyp_hz[7] = hyp_hz[8] = hyp_hz[9] = 260.0;

  vqtts::dsp::ProsodyTrack ref = track_from_hz(ref_hz);
  vqtts::dsp::ProsodyTrack hyp = track_from_hz(hyp_hz);

  double g = vqtts::eval::gpe(ref, hyp, 0.2);
  if (g != 0.3) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "3-of-10 case gave %.12f, want 0.3", g);
    *detail = buf;
    return false;
  }
  if (vqtts::eval::gpe(ref, ref, 0.2) != 0.0) {
    *detail = "identical tracks gave nonzero error";
    return false;
  }

  std::vector<double> ref2_hz, hyp2_hz;
  for (double v : ref_hz) ref2_hz.push_back(2.0 * v);
  for (double v : hyp_hz) hyp2_hz.push_back(2.0 * v);
  double doubled =
      vqtts::eval::gpe(track_from_hz(ref2_hz), track_from_hz(hyp2_hz), 0.2);
  if (doubled != g) {
    char buf[100];
    std::snprintf(buf, sizeof(buf),
                  "doubling both tracks changed the error: %.12f vs %.12f",
                  doubled, g);
    *detail = buf;
    return false;
  }
  return true;
}

// 7. Loss arithmetic: the four-term acoustic sum, and the mel warmup
//    weight inside and after the warmup window.
bool check_losses(std::string* detail) {
  vqtts::eval::LossBreakdown lb;
  lb.pl_lab = 1.5;
  lb.dur = 0.25;
  lb.vq = 2.0;
  lb.pros = 0.75;
  if (vqtts::eval::txt2vec_loss(lb) != 4.5) {
    *detail = "four-term sum is wrong";
    return false;
  }

  vqtts::eval::WarmupConfig cfg;
  bool sched = vqtts::eval::warmup_weight(cfg, 0) == 60.0 &&
               vqtts::eval::warmup_weight(cfg, 1) == 60.0 &&
               vqtts::eval::warmup_weight(cfg, 199999) == 60.0 &&
               vqtts::eval::warmup_weight(cfg, 200000) == 0.0 &&
               vqtts::eval::warmup_weight(cfg, 1000000) == 0.0;
  if (!sched) {
    *detail = "warmup weight schedule is wrong";
    return false;
  }

  lb.hifigan = 2.0;
  lb.mel = 0.5;
  if (vqtts::eval::vec2wav_loss(lb, cfg, 0) != 32.0 ||
      vqtts::eval::vec2wav_loss(lb, cfg, 200000) != 2.0) {
    *detail = "vocoder loss does not apply the schedule";
    return false;
  }
  return true;
}

struct HypRecord {
  std::string id;
  std::vector<std::vector<int>> token_lists;
};

HypRecord first_hyp_record(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("no hypotheses in " + path);
  nlohmann::json j = nlohmann::json::parse(line);
  HypRecord rec;
  rec.id = j.at("id").get<std::string>();
  for (const auto& h : j.at("hyps"))
    rec.token_lists.push_back(h.at("tokens").get<std::vector<int>>());
  return rec;
}

std::vector<std::vector<double>> read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

// 8. Diversity: beam-5 decoding of a toy utterance yields at least three
//    pairwise-distinct hypotheses whose rendered pitch tracks all differ.
bool check_diversity(std::string* detail) {
  testutil::TempDir tmp("accept_div");
  auto [train_m, test_m] = testutil::build_corpus(tmp.file("corpus"), 6, 2);
  std::string cfg_path = tmp.file("pipeline.cfg");
  testutil::write_config(cfg_path, train_m, test_m, tmp.file("work"),
                         "[decode]\nbeam = 5\n");
  vqtts::config::Config cfg = vqtts::config::Config::parse_file(cfg_path);

  std::vector<vqtts::pipeline::Failure> failures =
      vqtts::pipeline::cmd_extract(cfg);
  if (!failures.empty()) {
    *detail = "extract failed: " + failures[0].message;
    return false;
  }
  vqtts::pipeline::Options none;
  vqtts::pipeline::cmd_train_vq(cfg, none);
  vqtts::pipeline::cmd_label_prosody(cfg, none);
  vqtts::pipeline::cmd_train_lm(cfg);
  vqtts::pipeline::cmd_decode(cfg, none);
  vqtts::pipeline::cmd_export_pitch(cfg, none);

  HypRecord rec =
      first_hyp_record(tmp.file("work") + "/out/hyps_pl_beam5.jsonl");
  std::set<std::vector<int>> distinct(rec.token_lists.begin(),
                                      rec.token_lists.end());
  if (distinct.size() != rec.token_lists.size() || distinct.size() < 3) {
    char buf[100];
    std::snprintf(buf, sizeof(buf), "%zu distinct hypotheses out of %zu",
                  distinct.size(), rec.token_lists.size());
    *detail = buf;
    return false;
  }

  std::vector<std::vector<double>> div = read_csv_matrix(
      tmp.file("work") + "/out/pitch_pl_beam5_divergence.csv");
  if (div.size() != rec.token_lists.size()) {
    *detail = "divergence matrix size does not match hypothesis count";
    return false;
  }
  for (std::size_t a = 0; a < div.size(); ++a) {
    if (div[a].size() != div.size()) {
      *detail = "divergence matrix is not square";
      return false;
    }
    for (std::size_t b = 0; b < div.size(); ++b) {
      if (a == b && div[a][b] != 0.0) {
        *detail = "divergence diagonal is nonzero";
        return false;
      }
      if (a != b && !(div[a][b] > 0.0)) {
        char buf[100];
        std::snprintf(buf, sizeof(buf),
                      "hypotheses %zu and %zu have zero pitch divergence", a,
                      b);
        *detail = buf;
        return false;
      }
    }
  }
  return true;
}

// Cheap large-vocabulary model for the throughput check: a pool of fixed
// distributions selected by a hash of the history.
class PoolModel : public StepModel {
 public:
  PoolModel(uint64_t seed, int vocab, int pool) : vocab_(vocab) {
    std::mt19937_64 rng(seed);
    pool_.reserve(static_cast<std::size_t>(pool));
    for (int i = 0; i < pool; ++i)
      pool_.push_back(testutil::random_dist(rng, vocab));
  }

  int vocab_size() const override { return vocab_; }
  void next_dist(const std::vector<int>& history,
                 std::vector<double>& out) const override {
    std::string bytes(reinterpret_cast<const char*>(history.data()),
                      history.size() * sizeof(int));
    out = pool_[testutil::fnv1a(bytes) % pool_.size()];
  }

 private:
  int vocab_;
  std::vector<std::vector<double>> pool_;
};

std::vector<std::string> pipeline_artifacts() {
  return {
      "store/train.jsonl",  "store/train.f32",       "store/test.jsonl",
      "store/test.f32",     "store/norm_stats.json", "model/vq_codebook.bin",
      "model/vocabulary.json", "model/pl_codebook.bin", "model/lm_vq.json",
      "model/lm_pl.json",   "out/hyps_pl_beam2.jsonl",
  };
}

void run_pipeline(const std::string& cfg_path) {
  vqtts::config::Config cfg = vqtts::config::Config::parse_file(cfg_path);
  std::vector<vqtts::pipeline::Failure> failures =
      vqtts::pipeline::cmd_extract(cfg);
  if (!failures.empty())
    throw std::runtime_error("extract failed: " + failures[0].message);
  vqtts::pipeline::Options none;
  vqtts::pipeline::cmd_train_vq(cfg, none);
  vqtts::pipeline::cmd_label_prosody(cfg, none);
  vqtts::pipeline::cmd_train_lm(cfg);
  vqtts::pipeline::cmd_decode(cfg, none);
}

// 9. Throughput and determinism: beam-10 decoding over a production-sized
//    vocabulary stays under 5 seconds single-threaded, and the toy
//    pipeline is byte-identical across reruns and thread counts.
bool check_performance(std::string* detail) {
  PoolModel model(31337, 21500, 8);
  Timer decode_timer;
  std::vector<Hypothesis> hyps = beam_search(model, 1000, 10);
  double decode_s = decode_timer.seconds();
  if (hyps.size() != 10 || !std::isfinite(hyps[0].log_prob)) {
    *detail = "large-vocabulary decode returned a malformed result";
    return false;
  }
  if (decode_s >= 5.0) {
    char buf[100];
    std::snprintf(buf, sizeof(buf),
                  "beam-10 decode over 21500 classes took %.2fs (limit 5s)",
                  decode_s);
    *detail = buf;
    return false;
  }

  testutil::TempDir tmp("accept_det");
  auto [train_m, test_m] = testutil::build_corpus(tmp.file("corpus"), 6, 2);
  std::vector<std::string> work_dirs;
  for (int run = 0; run < 4; ++run) {
    std::string work = tmp.file("work" + std::to_string(run));
    std::string cfg_path = tmp.file("cfg" + std::to_string(run));
    testutil::write_config(cfg_path, train_m, test_m, work);
    if (run == 2) setenv("VQTTS_KIT_THREADS", "3", 1);
    if (run == 3) setenv("VQTTS_KIT_THREADS", "1", 1);
    run_pipeline(cfg_path);
    if (run >= 2) unsetenv("VQTTS_KIT_THREADS");
    work_dirs.push_back(work);
  }

  for (const std::string& rel : pipeline_artifacts()) {
    uint64_t want = testutil::fnv1a(testutil::read_file(work_dirs[0] + "/" + rel));
    for (std::size_t run = 1; run < work_dirs.size(); ++run) {
      uint64_t got =
          testutil::fnv1a(testutil::read_file(work_dirs[run] + "/" + rel));
      if (got != want) {
        *detail = "artifact differs across runs: " + rel;
        return false;
      }
    }
  }

  char buf[80];
  std::snprintf(buf, sizeof(buf), "decode took %.2fs", decode_s);
  *detail = buf;
  return true;
}

}  // namespace

int main() {
  Gate gate;
  gate.run("beam dominance and greedy equivalence on randomized models", 10.0,
           check_beam_dominance);
  gate.run("beam search matches exhaustive enumeration on small vocabularies",
           10.0, check_exhaustive_oracle);
  gate.run("beam search gains on a synthetic second-order Markov corpus",
           120.0, check_markov_replication);
  gate.run("k-means distortion, blob recovery and determinism", 30.0,
           check_kmeans);
  gate.run("pitch tracking accuracy on synthetic tones and silence", 10.0,
           check_pitch);
  gate.run("gross pitch error hand cases and scale invariance", 0.0,
           check_gpe);
  gate.run("loss composition and mel warmup schedule", 0.0, check_losses);
  gate.run("beam decoding yields diverse prosody hypotheses", 0.0,
           check_diversity);
  gate.run("decode throughput and pipeline byte determinism", 0.0,
           check_performance);

  std::printf("%d/9 checks passed\n", 9 - gate.failed);
  return gate.failed == 0 ? 0 : 1;
}
