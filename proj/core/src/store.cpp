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

#include "vqtts/store.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace vqtts {
namespace store {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string jsonl_path(const std::string& dir, const std::string& split) {
  return (fs::path(dir) / (split + ".jsonl")).string();
}

std::string sidecar_path(const std::string& dir, const std::string& split) {
  return (fs::path(dir) / (split + ".f32")).string();
}

void append_track(const Matrix& m, std::vector<float>& sidecar, json& ref) {
  ref["offset"] = sidecar.size();
  ref["rows"] = m.rows;
  ref["cols"] = m.cols;
  for (double v : m.data) sidecar.push_back(static_cast<float>(v));
}

Matrix read_track(const std::vector<float>& sidecar, const json& ref) {
  std::size_t offset = ref.at("offset").get<std::size_t>();
  std::size_t rows = ref.at("rows").get<std::size_t>();
  std::size_t cols = ref.at("cols").get<std::size_t>();
  if (offset + rows * cols > sidecar.size())
    throw std::runtime_error("track exceeds sidecar size");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i)
    m.data[i] = static_cast<double>(sidecar[offset + i]);
  return m;
}

}  // namespace

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  std::vector<ManifestEntry> entries;
  std::set<std::string> ids;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls(line);
    ManifestEntry e;
    if (!std::getline(ls, e.id, '\t') ||
        !std::getline(ls, e.wav_path, '\t') ||
        !std::getline(ls, e.alignment_path, '\t'))
      throw std::runtime_error("manifest line " + std::to_string(lineno) +
                               ": expected 3 tab-separated fields");
    if (!ids.insert(e.id).second)
      throw std::runtime_error("duplicate utterance id: " + e.id);
    if (!fs::exists(e.wav_path))
      throw std::runtime_error("missing wav: " + e.wav_path);
    if (!fs::exists(e.alignment_path))
      throw std::runtime_error("missing alignment: " + e.alignment_path);
    entries.push_back(std::move(e));
  }
  if (entries.empty()) throw std::runtime_error("empty manifest");
  return entries;
}

void save_split(const std::string& dir, const std::string& split,
                const std::vector<Record>& records) {
  fs::create_directories(dir);
  std::vector<float> sidecar;
  std::ostringstream lines;
  for (const Record& r : records) {
    std::size_t T = r.prosody.frames.rows;
    if (r.prosody.voiced.size() != T || r.delta9.rows != T || r.mel.rows != T)
      throw std::runtime_error("inconsistent frame counts for " + r.id);
    if (!r.tokens.empty() && r.tokens.size() != T)
      throw std::runtime_error("token count mismatch for " + r.id);
    if (!r.labels.empty() && r.labels.size() != r.segments.size())
      throw std::runtime_error("label count mismatch for " + r.id);

    json j;
    j["id"] = r.id;
    append_track(r.prosody.frames, sidecar, j["prosody"]);
    append_track(r.delta9, sidecar, j["delta9"]);
    append_track(r.mel, sidecar, j["mel"]);
    j["voiced"] = r.prosody.voiced;
    j["tokens"] = r.tokens;
    j["labels"] = r.labels;
    json segs = json::array();
    for (const auto& s : r.segments)
      segs.push_back({s.phoneme, s.start_frame, s.end_frame});
    j["segments"] = std::move(segs);
    lines << j.dump() << "\n";
  }

  std::ofstream jout(jsonl_path(dir, split), std::ios::binary);
  if (!jout) throw std::runtime_error("cannot write store in " + dir);
  jout << lines.str();

  std::ofstream sout(sidecar_path(dir, split), std::ios::binary);
  if (!sout) throw std::runtime_error("cannot write store in " + dir);
  static_assert(sizeof(float) == 4);
  if (!sidecar.empty())
    sout.write(reinterpret_cast<const char*>(sidecar.data()),
               static_cast<std::streamsize>(sidecar.size() * 4));
}

std::vector<Record> load_split(const std::string& dir,
                               const std::string& split) {
  std::ifstream sin(sidecar_path(dir, split), std::ios::binary);
  if (!sin)
    throw std::runtime_error("cannot open store split: " + split);
  std::vector<char> raw((std::istreambuf_iterator<char>(sin)),
                        std::istreambuf_iterator<char>());
  if (raw.size() % 4 != 0)
    throw std::runtime_error("corrupt sidecar for split: " + split);
  std::vector<float> sidecar(raw.size() / 4);
  if (!sidecar.empty()) std::memcpy(sidecar.data(), raw.data(), raw.size());

  std::ifstream jin(jsonl_path(dir, split));
  if (!jin)
    throw std::runtime_error("cannot open store split: " + split);
  std::vector<Record> records;
  std::string line;
  while (std::getline(jin, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    Record r;
    r.id = j.at("id").get<std::string>();
    r.prosody.frames = read_track(sidecar, j.at("prosody"));
    r.delta9 = read_track(sidecar, j.at("delta9"));
    r.mel = read_track(sidecar, j.at("mel"));
    r.prosody.voiced = j.at("voiced").get<std::vector<std::uint8_t>>();
    r.tokens = j.at("tokens").get<std::vector<int>>();
    r.labels = j.at("labels").get<std::vector<int>>();
    for (const auto& s : j.at("segments")) {
      prosody::PhonemeSegment seg;
      seg.phoneme = s.at(0).get<std::string>();
      seg.start_frame = s.at(1).get<int>();
      seg.end_frame = s.at(2).get<int>();
      r.segments.push_back(std::move(seg));
    }
    if (r.prosody.voiced.size() != r.prosody.frames.rows)
      throw std::runtime_error("corrupt record for " + r.id);
    records.push_back(std::move(r));
  }
  return records;
}

bool split_exists(const std::string& dir, const std::string& split) {
  return fs::exists(jsonl_path(dir, split)) &&
         fs::exists(sidecar_path(dir, split));
}

void save_stats(const std::string& dir, const dsp::NormStats& stats) {
  fs::create_directories(dir);
  json j;
  j["mean"] = stats.mean;
  j["std"] = stats.stddev;
  std::ofstream out((fs::path(dir) / "norm_stats.json").string());
  if (!out) throw std::runtime_error("cannot write norm stats in " + dir);
  out << j.dump() << "\n";
}

dsp::NormStats load_stats(const std::string& dir) {
  std::ifstream in((fs::path(dir) / "norm_stats.json").string());
  if (!in) throw std::runtime_error("cannot open norm stats in " + dir);
  json j = json::parse(in);
  dsp::NormStats stats;
  auto mean = j.at("mean").get<std::vector<double>>();
  auto stddev = j.at("std").get<std::vector<double>>();
  if (mean.size() != 3 || stddev.size() != 3)
    throw std::runtime_error("corrupt norm stats in " + dir);
  for (int c = 0; c < 3; ++c) {
    stats.mean[c] = mean[static_cast<std::size_t>(c)];
    stats.stddev[c] = stddev[static_cast<std::size_t>(c)];
  }
  return stats;
}

}  // namespace store
}  // namespace vqtts
