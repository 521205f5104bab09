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

#include "vqtts/vq.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "vqtts/kmeans.h"

namespace vqtts {
namespace vq {
namespace {

void write_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<char*>(b), 4);
}

uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) |
         (static_cast<uint32_t>(b[3]) << 24);
}

void write_u64(std::ostream& out, uint64_t v) {
  write_u32(out, static_cast<uint32_t>(v & 0xffffffffu));
  write_u32(out, static_cast<uint32_t>(v >> 32));
}

uint64_t read_u64(std::istream& in) {
  uint64_t lo = read_u32(in);
  uint64_t hi = read_u32(in);
  return lo | (hi << 32);
}

}  // namespace

int64_t combined_id(const Codebook& cb, const GroupedToken& tok) {
  if (static_cast<int>(tok.indices.size()) != cb.groups)
    throw std::invalid_argument("token group count mismatch");
  int64_t id = 0;
  for (int g = 0; g < cb.groups; ++g) {
    int idx = tok.indices[static_cast<std::size_t>(g)];
    if (idx < 0 || idx >= cb.entries_per_group)
      throw std::out_of_range("token index out of range");
    id = id * cb.entries_per_group + idx;
  }
  return id;
}

GroupedToken token_from_combined(const Codebook& cb, int64_t id) {
  int64_t capacity = 1;
  for (int g = 0; g < cb.groups; ++g) capacity *= cb.entries_per_group;
  if (id < 0 || id >= capacity)
    throw std::out_of_range("combined id out of range");
  GroupedToken tok;
  tok.indices.assign(static_cast<std::size_t>(cb.groups), 0);
  for (int g = cb.groups - 1; g >= 0; --g) {
    tok.indices[static_cast<std::size_t>(g)] =
        static_cast<int>(id % cb.entries_per_group);
    id /= cb.entries_per_group;
  }
  return tok;
}

Codebook train_codebook(const Matrix& frames, int groups, int entries_per_group,
                        int max_iters, uint64_t seed) {
  if (groups < 1) throw std::invalid_argument("groups must be >= 1");
  if (frames.cols == 0 || frames.cols % static_cast<std::size_t>(groups) != 0)
    throw std::invalid_argument("dimension not divisible by groups");
  if (frames.rows < static_cast<std::size_t>(entries_per_group))
    throw std::runtime_error("insufficient data");

  Codebook cb;
  cb.groups = groups;
  cb.entries_per_group = entries_per_group;
  cb.dim = static_cast<int>(frames.cols);
  cb.seed = seed;

  std::size_t gd = frames.cols / static_cast<std::size_t>(groups);
  for (int g = 0; g < groups; ++g) {
    Matrix slice(frames.rows, gd);
    for (std::size_t i = 0; i < frames.rows; ++i)
      std::memcpy(slice.row(i), frames.row(i) + static_cast<std::size_t>(g) * gd,
                  gd * sizeof(double));
    kmeans::Result res = kmeans::run(slice, entries_per_group, max_iters,
                                     seed + static_cast<uint64_t>(g));
    cb.centroids.push_back(std::move(res.centroids));
  }
  return cb;
}

GroupedToken quantize(const Codebook& cb, const double* frame) {
  GroupedToken tok;
  tok.indices.reserve(static_cast<std::size_t>(cb.groups));
  std::size_t gd = static_cast<std::size_t>(cb.group_dim());
  for (int g = 0; g < cb.groups; ++g)
    tok.indices.push_back(kmeans::nearest(
        cb.centroids[static_cast<std::size_t>(g)],
        frame + static_cast<std::size_t>(g) * gd));
  return tok;
}

GroupedToken quantize(const Codebook& cb, const std::vector<double>& frame) {
  if (frame.size() != static_cast<std::size_t>(cb.dim))
    throw std::invalid_argument("frame dimension mismatch");
  return quantize(cb, frame.data());
}

std::vector<double> dequantize(const Codebook& cb, const GroupedToken& tok) {
  if (static_cast<int>(tok.indices.size()) != cb.groups)
    throw std::invalid_argument("token group count mismatch");
  std::size_t gd = static_cast<std::size_t>(cb.group_dim());
  std::vector<double> out(static_cast<std::size_t>(cb.dim));
  for (int g = 0; g < cb.groups; ++g) {
    int idx = tok.indices[static_cast<std::size_t>(g)];
    if (idx < 0 || idx >= cb.entries_per_group)
      throw std::out_of_range("token index out of range");
    const double* row =
        cb.centroids[static_cast<std::size_t>(g)].row(static_cast<std::size_t>(idx));
    std::memcpy(out.data() + static_cast<std::size_t>(g) * gd, row,
                gd * sizeof(double));
  }
  return out;
}

TokenVocabulary build_vocabulary(const std::vector<int64_t>& combined_stream) {
  if (combined_stream.empty())
    throw std::invalid_argument("empty token stream");
  TokenVocabulary vocab;
  for (int64_t id : combined_stream) {
    if (vocab.dense_ids.find(id) == vocab.dense_ids.end()) {
      vocab.dense_ids.emplace(id, vocab.size());
      vocab.combined_ids.push_back(id);
    }
  }
  return vocab;
}

void save_codebook(const std::string& path, const Codebook& cb) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write codebook: " + path);
  out.write("VQCB", 4);
  write_u32(out, cb.version);
  write_u32(out, static_cast<uint32_t>(cb.groups));
  write_u32(out, static_cast<uint32_t>(cb.entries_per_group));
  write_u32(out, static_cast<uint32_t>(cb.dim));
  for (const Matrix& m : cb.centroids)
    for (double v : m.data) {
      float f = static_cast<float>(v);
      uint32_t bits;
      std::memcpy(&bits, &f, 4);
      write_u32(out, bits);
    }
  write_u64(out, cb.seed);
}

Codebook load_codebook(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open codebook: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "VQCB", 4) != 0)
    throw std::runtime_error("bad codebook magic: " + path);
  Codebook cb;
  cb.version = read_u32(in);
  cb.groups = static_cast<int>(read_u32(in));
  cb.entries_per_group = static_cast<int>(read_u32(in));
  cb.dim = static_cast<int>(read_u32(in));
  if (cb.groups < 1 || cb.entries_per_group < 1 || cb.dim < 1 ||
      cb.dim % cb.groups != 0)
    throw std::runtime_error("bad codebook header: " + path);
  std::size_t gd = static_cast<std::size_t>(cb.dim / cb.groups);
  for (int g = 0; g < cb.groups; ++g) {
    Matrix m(static_cast<std::size_t>(cb.entries_per_group), gd);
    for (double& v : m.data) {
      uint32_t bits = read_u32(in);
      float f;
      std::memcpy(&f, &bits, 4);
      v = static_cast<double>(f);
    }
    cb.centroids.push_back(std::move(m));
  }
  cb.seed = read_u64(in);
  if (!in) throw std::runtime_error("truncated codebook: " + path);
  return cb;
}

void save_vocabulary(const std::string& path, const TokenVocabulary& vocab) {
  nlohmann::json arr = nlohmann::json::array();
  for (int64_t id : vocab.combined_ids) arr.push_back(id);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write vocabulary: " + path);
  out << arr.dump() << "\n";
}

TokenVocabulary load_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocabulary: " + path);
  nlohmann::json arr = nlohmann::json::parse(in);
  if (!arr.is_array()) throw std::runtime_error("bad vocabulary file: " + path);
  TokenVocabulary vocab;
  for (const auto& v : arr) {
    int64_t id = v.get<int64_t>();
    if (vocab.dense_ids.count(id))
      throw std::runtime_error("duplicate vocabulary entry: " + path);
    vocab.dense_ids.emplace(id, vocab.size());
    vocab.combined_ids.push_back(id);
  }
  return vocab;
}

}  // namespace vq
}  // namespace vqtts
