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

#include "vqtts/pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "vqtts/decode.h"
#include "vqtts/dsp.h"
#include "vqtts/prosody.h"
#include "vqtts/store.h"
#include "vqtts/threading.h"
#include "vqtts/vq.h"
#include "vqtts/wav.h"

namespace vqtts {
namespace pipeline {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kSplits[] = {"train", "valid", "test"};

struct Settings {
  std::string store_dir;
  std::string model_dir;
  std::string out_dir;

  dsp::FrameSpec frame_spec;
  dsp::PitchRange pitch_range;
  double voicing = 0.3;
  int n_fft = 512;
  int n_mels = 80;
  int delta_window = 2;

  int vq_groups = 2;
  int vq_entries = 320;
  int vq_iters = 50;
  uint64_t vq_seed = 1;

  int pl_classes = 128;
  int pl_iters = 100;
  uint64_t pl_seed = 1;

  int lm_order = 2;
  double lm_lambda = 0.1;

  std::string stream = "pl";
  std::string split = "test";
  std::string mode = "beam";
  int beam = 5;
  int prime = 0;

  double gpe_threshold = 0.2;
};

Settings resolve(const config::Config& cfg) {
  Settings s;
  s.store_dir = cfg.require_string("paths.store_dir");
  s.model_dir = cfg.require_string("paths.model_dir");
  s.out_dir = cfg.require_string("paths.out_dir");

  s.frame_spec.frame_length_ms = cfg.get_double("audio.frame_ms", 25.0);
  s.frame_spec.frame_shift_ms = cfg.get_double("audio.shift_ms", 10.0);
  s.pitch_range.f_min = cfg.get_double("audio.f_min", 60.0);
  s.pitch_range.f_max = cfg.get_double("audio.f_max", 400.0);
  s.voicing = cfg.get_double("audio.voicing_threshold", 0.3);
  s.n_fft = static_cast<int>(cfg.get_int("audio.n_fft", 512));
  s.n_mels = static_cast<int>(cfg.get_int("audio.n_mels", 80));
  s.delta_window = static_cast<int>(cfg.get_int("audio.delta_window", 2));

  s.vq_groups = static_cast<int>(cfg.get_int("vq.groups", 2));
  s.vq_entries = static_cast<int>(cfg.get_int("vq.entries", 320));
  s.vq_iters = static_cast<int>(cfg.get_int("vq.max_iters", 50));
  s.vq_seed = static_cast<uint64_t>(cfg.get_int("vq.seed", 1));

  s.pl_classes = static_cast<int>(cfg.get_int("prosody.classes", 128));
  s.pl_iters = static_cast<int>(cfg.get_int("prosody.max_iters", 100));
  s.pl_seed = static_cast<uint64_t>(cfg.get_int("prosody.seed", 1));

  s.lm_order = static_cast<int>(cfg.get_int("lm.order", 2));
  s.lm_lambda = cfg.get_double("lm.lambda", 0.1);

  s.stream = cfg.get_string("decode.stream", "pl");
  if (s.stream != "pl" && s.stream != "vq")
    throw std::runtime_error("decode.stream must be pl or vq");
  s.split = cfg.get_string("decode.split", "test");
  s.mode = cfg.get_string("decode.mode", "beam");
  s.beam = static_cast<int>(cfg.get_int("decode.beam", 5));
  s.prime = static_cast<int>(cfg.get_int("decode.prime", 0));

  s.gpe_threshold = cfg.get_double("eval.gpe_threshold", 0.2);
  return s;
}

std::vector<std::pair<std::string, std::string>> configured_manifests(
    const config::Config& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const char* split : kSplits) {
    std::string key = std::string("paths.manifest_") + split;
    if (cfg.has(key)) out.emplace_back(split, cfg.require_string(key));
  }
  if (out.empty())
    throw std::runtime_error("no split manifests configured under [paths]");
  return out;
}

std::vector<std::string> stored_splits(const Settings& s) {
  std::vector<std::string> out;
  for (const char* split : kSplits)
    if (store::split_exists(s.store_dir, split)) out.push_back(split);
  if (out.empty())
    throw std::runtime_error("feature store is empty; run extract first");
  return out;
}

std::string hyps_path(const Settings& s, const std::string& tag) {
  return (fs::path(s.out_dir) / ("hyps_" + s.stream + "_" + tag + ".jsonl"))
      .string();
}

std::string resolved_mode(const Settings& s, const Options& opt) {
  std::string mode = opt.mode.value_or(s.mode);
  if (mode != "greedy" && mode != "beam")
    throw std::runtime_error("mode must be greedy or beam");
  return mode;
}

int resolved_beam(const Settings& s, const Options& opt) {
  int beam = opt.beam.value_or(s.beam);
  if (beam < 1) throw std::runtime_error("beam must be >= 1");
  return beam;
}

// Reference sequence for the configured decode stream: per-frame acoustic
// tokens or per-segment prosody labels.
const std::vector<int>& stream_refs(const Settings& s,
                                    const store::Record& rec) {
  if (s.stream == "vq") {
    if (rec.tokens.empty())
      throw std::runtime_error("store has no tokens; run train-vq first");
    return rec.tokens;
  }
  if (rec.labels.empty() && !rec.segments.empty())
    throw std::runtime_error("store has no labels; run label-prosody first");
  return rec.labels;
}

int stream_vocab_size(const Settings& s) {
  if (s.stream == "vq") {
    vq::TokenVocabulary vocab = vq::load_vocabulary(
        (fs::path(s.model_dir) / "vocabulary.json").string());
    return vocab.size() + 1;
  }
  prosody::PLProsodyCodebook cb = prosody::load_pl_codebook(
      (fs::path(s.model_dir) / "pl_codebook.bin").string());
  return cb.n + 1;
}

// Frame-level prosody track implied by a per-segment label sequence:
// each segment's frames take its label's centroid (denormalized), frames
// outside every segment stay unvoiced.
dsp::ProsodyTrack render_label_track(const prosody::PLProsodyCodebook& cb,
                                     const dsp::NormStats& stats,
                                     const std::vector<prosody::PhonemeSegment>& segments,
                                     const std::vector<int>& labels,
                                     std::size_t n_frames, double voicing) {
  if (labels.size() != segments.size())
    throw std::runtime_error("label count does not match segments");
  dsp::ProsodyTrack tr;
  tr.frames = Matrix(n_frames, 3);
  tr.voiced.assign(n_frames, 0);
  std::vector<uint8_t> covered(n_frames, 0);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    int lab = labels[i];
    if (lab < 0 || lab >= cb.n)
      throw std::runtime_error("label out of range");
    for (int t = segments[i].start_frame; t < segments[i].end_frame; ++t) {
      for (std::size_t c = 0; c < 3; ++c)
        tr.frames.at(static_cast<std::size_t>(t), c) =
            cb.centroids.at(static_cast<std::size_t>(lab), c);
      covered[static_cast<std::size_t>(t)] = 1;
    }
  }
  tr = dsp::denormalize(tr, stats);
  for (std::size_t t = 0; t < n_frames; ++t)
    tr.voiced[t] = covered[t] && tr.frames.at(t, 2) >= voicing ? 1 : 0;
  return tr;
}

struct HypRecord {
  std::string id;
  std::vector<int> prime;
  std::vector<decode::Hypothesis> hyps;  // tokens without the leading BOS
};

std::vector<HypRecord> read_hyps(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("missing hypotheses; run decode first: " + path);
  std::vector<HypRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    HypRecord r;
    r.id = j.at("id").get<std::string>();
    r.prime = j.at("prime").get<std::vector<int>>();
    for (const auto& h : j.at("hyps")) {
      decode::Hypothesis hyp;
      hyp.tokens = h.at("tokens").get<std::vector<int>>();
      hyp.log_prob = h.at("lp").get<double>();
      r.hyps.push_back(std::move(hyp));
    }
    out.push_back(std::move(r));
  }
  if (out.empty()) throw std::runtime_error("no hypotheses in " + path);
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::string decode_tag(const std::string& mode, int beam) {
  return mode == "greedy" ? "greedy" : "beam" + std::to_string(beam);
}

std::vector<Failure> cmd_extract(const config::Config& cfg) {
  Settings s = resolve(cfg);
  auto manifests = configured_manifests(cfg);

  struct SplitWork {
    std::string split;
    std::vector<store::ManifestEntry> entries;
    std::vector<store::Record> records;  // slot per entry
    std::vector<std::string> errors;     // slot per entry, empty = ok
  };
  std::vector<SplitWork> work;
  for (const auto& [split, manifest] : manifests) {
    SplitWork w;
    w.split = split;
    w.entries = store::read_manifest(manifest);
    w.records.resize(w.entries.size());
    w.errors.resize(w.entries.size());
    work.push_back(std::move(w));
  }

  for (SplitWork& w : work) {
    threading::parallel_for(w.entries.size(), [&](std::size_t i) {
      const store::ManifestEntry& e = w.entries[i];
      try {
        Waveform wave = read_wav(e.wav_path);
        store::Record rec;
        rec.id = e.id;
        rec.prosody =
            dsp::extract_prosody(wave, s.frame_spec, s.pitch_range, s.voicing);
        rec.mel =
            dsp::mel_spectrogram(wave, s.frame_spec, s.n_fft, s.n_mels).frames;
        prosody::Alignment ali = prosody::read_alignment(e.alignment_path);
        if (ali.utt_id != e.id)
          throw std::runtime_error("alignment id mismatch: " + ali.utt_id);
        if (ali.n_frames != static_cast<int>(rec.prosody.frames.rows))
          throw std::runtime_error("alignment frame count mismatch");
        rec.segments = std::move(ali.segments);
        w.records[i] = std::move(rec);
      } catch (const std::exception& ex) {
        w.errors[i] = ex.what();
      }
    });
  }

  std::vector<Failure> failures;
  for (SplitWork& w : work) {
    std::vector<store::Record> kept;
    for (std::size_t i = 0; i < w.entries.size(); ++i) {
      if (w.errors[i].empty())
        kept.push_back(std::move(w.records[i]));
      else
        failures.push_back(Failure{w.entries[i].id, w.errors[i]});
    }
    w.records = std::move(kept);
  }

  const SplitWork* train = nullptr;
  for (const SplitWork& w : work)
    if (w.split == "train") train = &w;
  if (train == nullptr || train->records.empty())
    throw std::runtime_error("no train utterances extracted");

  std::vector<dsp::ProsodyTrack> corpus;
  corpus.reserve(train->records.size());
  for (const store::Record& r : train->records) corpus.push_back(r.prosody);
  dsp::NormStats stats = dsp::compute_stats(corpus);

  for (SplitWork& w : work) {
    threading::parallel_for(w.records.size(), [&](std::size_t i) {
      store::Record& rec = w.records[i];
      rec.prosody = dsp::normalize(rec.prosody, stats);
      rec.delta9 = dsp::delta_features(rec.prosody.frames, s.delta_window);
    });
    store::save_split(s.store_dir, w.split, w.records);
  }
  store::save_stats(s.store_dir, stats);
  return failures;
}

void cmd_train_vq(const config::Config& cfg, const Options& opt) {
  Settings s = resolve(cfg);
  uint64_t seed = opt.seed.value_or(s.vq_seed);

  std::vector<std::string> splits = stored_splits(s);
  std::map<std::string, std::vector<store::Record>> stores;
  for (const std::string& split : splits)
    stores[split] = store::load_split(s.store_dir, split);
  auto train_it = stores.find("train");
  if (train_it == stores.end())
    throw std::runtime_error("store has no train split; run extract first");

  std::size_t n_frames = 0;
  for (const store::Record& r : train_it->second) n_frames += r.mel.rows;
  if (n_frames == 0) throw std::runtime_error("insufficient data");
  Matrix frames(n_frames, static_cast<std::size_t>(s.n_mels));
  std::size_t at = 0;
  for (const store::Record& r : train_it->second) {
    if (r.mel.cols != static_cast<std::size_t>(s.n_mels))
      throw std::runtime_error("stored mel width does not match audio.n_mels");
    std::copy(r.mel.data.begin(), r.mel.data.end(),
              frames.data.begin() +
                  static_cast<std::ptrdiff_t>(at * frames.cols));
    at += r.mel.rows;
  }

  vq::Codebook cb =
      vq::train_codebook(frames, s.vq_groups, s.vq_entries, s.vq_iters, seed);
  fs::create_directories(s.model_dir);
  vq::save_codebook((fs::path(s.model_dir) / "vq_codebook.bin").string(), cb);

  // Combined ids per utterance, then one vocabulary over every stored
  // split so evaluation-side sequences are always in-vocabulary.
  std::map<std::string, std::vector<std::vector<int64_t>>> combined;
  for (const std::string& split : splits) {
    auto& recs = stores[split];
    auto& ids = combined[split];
    ids.resize(recs.size());
    threading::parallel_for(recs.size(), [&](std::size_t i) {
      const Matrix& mel = recs[i].mel;
      std::vector<int64_t> seq(mel.rows);
      for (std::size_t t = 0; t < mel.rows; ++t)
        seq[t] = vq::combined_id(cb, vq::quantize(cb, mel.row(t)));
      ids[i] = std::move(seq);
    });
  }

  std::vector<int64_t> stream;
  stream.reserve(n_frames);
  for (const std::string& split : splits)
    for (const auto& seq : combined[split])
      stream.insert(stream.end(), seq.begin(), seq.end());
  vq::TokenVocabulary vocab = vq::build_vocabulary(stream);
  vq::save_vocabulary((fs::path(s.model_dir) / "vocabulary.json").string(),
                      vocab);

  for (const std::string& split : splits) {
    auto& recs = stores[split];
    for (std::size_t i = 0; i < recs.size(); ++i) {
      recs[i].tokens.resize(combined[split][i].size());
      for (std::size_t t = 0; t < combined[split][i].size(); ++t)
        recs[i].tokens[t] = vocab.dense(combined[split][i][t]);
    }
    store::save_split(s.store_dir, split, recs);
  }
}

void cmd_label_prosody(const config::Config& cfg, const Options& opt) {
  Settings s = resolve(cfg);
  uint64_t seed = opt.seed.value_or(s.pl_seed);

  std::vector<std::string> splits = stored_splits(s);
  std::map<std::string, std::vector<store::Record>> stores;
  for (const std::string& split : splits)
    stores[split] = store::load_split(s.store_dir, split);
  auto train_it = stores.find("train");
  if (train_it == stores.end())
    throw std::runtime_error("store has no train split; run extract first");

  std::size_t n_reprs = 0;
  for (const store::Record& r : train_it->second) n_reprs += r.segments.size();
  if (n_reprs == 0) throw std::runtime_error("insufficient data");
  Matrix reprs(n_reprs, 9);
  std::size_t at = 0;
  for (const store::Record& r : train_it->second)
    for (const auto& seg : r.segments) {
      std::vector<double> v = prosody::phoneme_prosody(r.delta9, seg);
      std::copy(v.begin(), v.end(), reprs.row(at));
      ++at;
    }

  prosody::PLProsodyCodebook cb =
      prosody::train_pl_codebook(reprs, s.pl_classes, seed);
  fs::create_directories(s.model_dir);
  prosody::save_pl_codebook(
      (fs::path(s.model_dir) / "pl_codebook.bin").string(), cb);

  for (const std::string& split : splits) {
    auto& recs = stores[split];
    threading::parallel_for(recs.size(), [&](std::size_t i) {
      store::Record& rec = recs[i];
      rec.labels.resize(rec.segments.size());
      for (std::size_t k = 0; k < rec.segments.size(); ++k)
        rec.labels[k] =
            prosody::label(cb, prosody::phoneme_prosody(rec.delta9,
                                                        rec.segments[k]));
    });
    store::save_split(s.store_dir, split, recs);
  }
}

void cmd_train_lm(const config::Config& cfg) {
  Settings s = resolve(cfg);
  std::vector<store::Record> train = store::load_split(s.store_dir, "train");
  if (train.empty())
    throw std::runtime_error("store has no train split; run extract first");

  std::vector<std::vector<int>> token_corpus, label_corpus;
  for (const store::Record& r : train) {
    if (r.tokens.empty())
      throw std::runtime_error("store has no tokens; run train-vq first");
    if (r.labels.empty() && !r.segments.empty())
      throw std::runtime_error("store has no labels; run label-prosody first");
    token_corpus.push_back(r.tokens);
    label_corpus.push_back(r.labels);
  }

  vq::TokenVocabulary vocab = vq::load_vocabulary(
      (fs::path(s.model_dir) / "vocabulary.json").string());
  decode::MarkovModel lm_vq = decode::train_markov(
      token_corpus, s.lm_order, s.lm_lambda, vocab.size() + 1);
  lm_vq.save((fs::path(s.model_dir) / "lm_vq.json").string());

  prosody::PLProsodyCodebook plcb = prosody::load_pl_codebook(
      (fs::path(s.model_dir) / "pl_codebook.bin").string());
  decode::MarkovModel lm_pl = decode::train_markov(
      label_corpus, s.lm_order, s.lm_lambda, plcb.n + 1);
  lm_pl.save((fs::path(s.model_dir) / "lm_pl.json").string());
}

void cmd_decode(const config::Config& cfg, const Options& opt) {
  Settings s = resolve(cfg);
  std::string mode = resolved_mode(s, opt);
  int beam = resolved_beam(s, opt);

  std::vector<store::Record> recs = store::load_split(s.store_dir, s.split);
  if (recs.empty()) throw std::runtime_error("decode split is empty");
  decode::MarkovModel lm = decode::MarkovModel::load(
      (fs::path(s.model_dir) / ("lm_" + s.stream + ".json")).string());
  if (lm.vocab_size() != stream_vocab_size(s))
    throw std::runtime_error("vocabulary mismatch between model and store");

  struct Out {
    std::vector<int> prime;
    std::vector<decode::Hypothesis> hyps;
  };
  std::vector<Out> outs(recs.size());
  threading::parallel_for(recs.size(), [&](std::size_t i) {
    const std::vector<int>& refs = stream_refs(s, recs[i]);
    if (static_cast<int>(refs.size()) <= s.prime)
      throw std::runtime_error("sequence shorter than priming context: " +
                               recs[i].id);
    Out& o = outs[i];
    o.prime.assign(refs.begin(), refs.begin() + s.prime);
    int length = static_cast<int>(refs.size()) - s.prime;
    if (s.prime > 0) {
      decode::PrimedModel primed(lm, o.prime);
      o.hyps = mode == "greedy"
                   ? std::vector<decode::Hypothesis>{decode::greedy_decode(
                         primed, length)}
                   : decode::beam_search(primed, length, beam);
    } else {
      o.hyps = mode == "greedy"
                   ? std::vector<decode::Hypothesis>{decode::greedy_decode(
                         lm, length)}
                   : decode::beam_search(lm, length, beam);
    }
  });

  fs::create_directories(s.out_dir);
  std::ofstream out(hyps_path(s, decode_tag(mode, beam)), std::ios::binary);
  if (!out) throw std::runtime_error("cannot write hypotheses file");
  for (std::size_t i = 0; i < recs.size(); ++i) {
    json j;
    j["id"] = recs[i].id;
    j["stream"] = s.stream;
    j["prime"] = outs[i].prime;
    json hyps = json::array();
    for (const decode::Hypothesis& h : outs[i].hyps) {
      json jh;
      jh["lp"] = h.log_prob;
      jh["tokens"] = std::vector<int>(h.tokens.begin() + 1, h.tokens.end());
      hyps.push_back(std::move(jh));
    }
    j["hyps"] = std::move(hyps);
    out << j.dump() << "\n";
  }
}

eval::EvalReport cmd_evaluate(const config::Config& cfg, const Options& opt) {
  Settings s = resolve(cfg);
  std::string mode = resolved_mode(s, opt);
  int beam = resolved_beam(s, opt);
  std::string tag = decode_tag(mode, beam);

  std::vector<store::Record> recs = store::load_split(s.store_dir, s.split);
  std::map<std::string, const store::Record*> by_id;
  for (const store::Record& r : recs) by_id[r.id] = &r;
  std::vector<HypRecord> hyps = read_hyps(hyps_path(s, tag));

  int64_t hits = 0, total = 0;
  int64_t voiced = 0, gross = 0;

  prosody::PLProsodyCodebook plcb;
  dsp::NormStats stats;
  if (s.stream == "pl") {
    plcb = prosody::load_pl_codebook(
        (fs::path(s.model_dir) / "pl_codebook.bin").string());
    stats = store::load_stats(s.store_dir);
  }

  for (const HypRecord& hr : hyps) {
    auto it = by_id.find(hr.id);
    if (it == by_id.end())
      throw std::runtime_error("hypotheses reference unknown utterance: " +
                               hr.id);
    const store::Record& rec = *it->second;
    const std::vector<int>& refs = stream_refs(s, rec);
    if (hr.hyps.empty())
      throw std::runtime_error("no hypotheses for utterance: " + hr.id);
    const std::vector<int>& top = hr.hyps.front().tokens;
    if (hr.prime.size() + top.size() != refs.size())
      throw std::runtime_error("hypothesis length mismatch for " + hr.id);
    for (std::size_t i = 0; i < top.size(); ++i) {
      ++total;
      if (top[i] == refs[hr.prime.size() + i]) ++hits;
    }

    if (s.stream == "pl") {
      std::vector<int> full(hr.prime);
      full.insert(full.end(), top.begin(), top.end());
      dsp::ProsodyTrack ref_tr = render_label_track(
          plcb, stats, rec.segments, rec.labels, rec.prosody.frames.rows,
          s.voicing);
      dsp::ProsodyTrack hyp_tr = render_label_track(
          plcb, stats, rec.segments, full, rec.prosody.frames.rows,
          s.voicing);
      for (std::size_t t = 0; t < ref_tr.frames.rows; ++t) {
        if (!ref_tr.voiced[t] || !hyp_tr.voiced[t]) continue;
        ++voiced;
        double f_ref = std::exp(ref_tr.frames.at(t, 0));
        double f_hyp = std::exp(hyp_tr.frames.at(t, 0));
        if (std::abs(f_hyp - f_ref) / f_ref > s.gpe_threshold) ++gross;
      }
    }
  }

  if (total == 0) throw std::runtime_error("nothing to evaluate");
  if (s.stream == "pl" && voiced == 0)
    throw std::runtime_error("no voiced overlap");

  eval::EvalReport report;
  report.token_accuracy = static_cast<double>(hits) / static_cast<double>(total);
  report.n_tokens = total;
  if (s.stream == "pl") {
    report.gpe = static_cast<double>(gross) / static_cast<double>(voiced);
    report.n_voiced_frames = voiced;
  }

  fs::create_directories(s.out_dir);
  json j;
  j["stream"] = s.stream;
  j["mode"] = mode;
  if (mode == "beam") j["beam"] = beam;
  j["token_accuracy"] = report.token_accuracy;
  j["n_tokens"] = report.n_tokens;
  if (s.stream == "pl") {
    j["gpe"] = report.gpe;
    j["n_voiced_frames"] = report.n_voiced_frames;
  }
  std::ofstream out(
      (fs::path(s.out_dir) / ("report_" + s.stream + "_" + tag + ".json"))
          .string(),
      std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report file");
  out << j.dump() << "\n";
  return report;
}

void cmd_export_pitch(const config::Config& cfg, const Options& opt) {
  Settings s = resolve(cfg);
  if (s.stream != "pl")
    throw std::runtime_error("pitch export requires the pl prosody stream");
  std::string mode = resolved_mode(s, opt);
  int beam = resolved_beam(s, opt);
  std::string tag = decode_tag(mode, beam);

  std::vector<HypRecord> hyps = read_hyps(hyps_path(s, tag));
  std::string utt = cfg.get_string("export.utterance", hyps.front().id);
  const HypRecord* hr = nullptr;
  for (const HypRecord& r : hyps)
    if (r.id == utt) hr = &r;
  if (hr == nullptr)
    throw std::runtime_error("utterance not found in hypotheses: " + utt);

  std::vector<store::Record> recs = store::load_split(s.store_dir, s.split);
  const store::Record* rec = nullptr;
  for (const store::Record& r : recs)
    if (r.id == utt) rec = &r;
  if (rec == nullptr)
    throw std::runtime_error("utterance not found in store: " + utt);

  prosody::PLProsodyCodebook plcb = prosody::load_pl_codebook(
      (fs::path(s.model_dir) / "pl_codebook.bin").string());
  dsp::NormStats stats = store::load_stats(s.store_dir);

  std::vector<dsp::ProsodyTrack> tracks;
  for (const decode::Hypothesis& h : hr->hyps) {
    std::vector<int> full(hr->prime);
    full.insert(full.end(), h.tokens.begin(), h.tokens.end());
    tracks.push_back(render_label_track(plcb, stats, rec->segments, full,
                                        rec->prosody.frames.rows, s.voicing));
  }

  fs::create_directories(s.out_dir);
  std::string base =
      (fs::path(s.out_dir) / ("pitch_" + s.stream + "_" + tag)).string();
  std::ofstream out(base + ".csv", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write pitch csv");
  out << "frame_index,hypothesis_id,log_pitch,voiced\n";
  for (std::size_t h = 0; h < tracks.size(); ++h)
    for (std::size_t t = 0; t < tracks[h].frames.rows; ++t)
      out << t << "," << h << "," << format_double(tracks[h].frames.at(t, 0))
          << "," << static_cast<int>(tracks[h].voiced[t]) << "\n";

  if (tracks.size() >= 2) {
    Matrix div = eval::hypothesis_divergence(tracks);
    std::ofstream dout(base + "_divergence.csv", std::ios::binary);
    if (!dout) throw std::runtime_error("cannot write divergence csv");
    for (std::size_t a = 0; a < div.rows; ++a) {
      for (std::size_t b = 0; b < div.cols; ++b) {
        if (b) dout << ",";
        dout << format_double(div.at(a, b));
      }
      dout << "\n";
    }
  }
}

}  // namespace pipeline
}  // namespace vqtts
