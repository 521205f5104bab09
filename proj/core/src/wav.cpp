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

#include "vqtts/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace vqtts {
namespace {

uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) |
         (static_cast<uint32_t>(b[3]) << 24);
}

uint16_t read_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

void write_u32(std::ostream& out, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

void write_u16(std::ostream& out, uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.write(b, 2);
}

}  // namespace

Waveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open wav file: " + path);

  char tag[4];
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "RIFF", 4) != 0)
    throw std::runtime_error("not a RIFF file: " + path);
  read_u32(in);  // overall size, unused
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "WAVE", 4) != 0)
    throw std::runtime_error("not a WAVE file: " + path);

  Waveform wave;
  bool have_fmt = false;
  uint16_t channels = 0, bits = 0, format = 0;

  while (in.read(tag, 4)) {
    uint32_t chunk_size = read_u32(in);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      format = read_u16(in);
      channels = read_u16(in);
      wave.sample_rate = static_cast<int>(read_u32(in));
      read_u32(in);  // byte rate
      read_u16(in);  // block align
      bits = read_u16(in);
      if (chunk_size > 16) in.seekg(chunk_size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!have_fmt) throw std::runtime_error("data chunk before fmt: " + path);
      if (format != 1) throw std::runtime_error("only PCM wav supported: " + path);
      if (bits != 16) throw std::runtime_error("only 16-bit wav supported: " + path);
      if (channels != 1)
        throw std::runtime_error("stereo input is not supported: " + path);
      size_t n = chunk_size / 2;
      std::vector<char> raw(chunk_size);
      in.read(raw.data(), chunk_size);
      if (static_cast<uint32_t>(in.gcount()) != chunk_size)
        throw std::runtime_error("truncated data chunk: " + path);
      wave.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        int16_t s = static_cast<int16_t>(
            static_cast<unsigned char>(raw[2 * i]) |
            (static_cast<unsigned char>(raw[2 * i + 1]) << 8));
        wave.samples[i] = s / 32768.0;
      }
      return wave;
    } else {
      in.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
    }
  }
  throw std::runtime_error("no data chunk: " + path);
}

void write_wav(const std::string& path, const Waveform& wave) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write wav file: " + path);

  uint32_t data_bytes = static_cast<uint32_t>(wave.samples.size() * 2);
  out.write("RIFF", 4);
  write_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<uint32_t>(wave.sample_rate));
  write_u32(out, static_cast<uint32_t>(wave.sample_rate * 2));
  write_u16(out, 2);
  write_u16(out, 16);
  out.write("data", 4);
  write_u32(out, data_bytes);
  for (double s : wave.samples) {
    double clipped = std::clamp(s, -1.0, 1.0);
    int v = static_cast<int>(std::lrint(clipped * 32767.0));
    write_u16(out, static_cast<uint16_t>(static_cast<int16_t>(v)));
  }
}

}  // namespace vqtts
