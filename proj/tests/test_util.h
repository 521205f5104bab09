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

#ifndef VQTTS_TESTS_TEST_UTIL_H_
#define VQTTS_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vqtts/wav.h"

namespace testutil {

// Self-deleting scratch directory for one test case.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0; i < 10000; ++i) {
      auto candidate = base / ("vqtts_" + tag + "_" + std::to_string(i));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create temp dir");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string str() const { return path_.string(); }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline vqtts::Waveform make_tone(double freq, double seconds, int rate,
                                 double amplitude = 0.5) {
  vqtts::Waveform w;
  w.sample_rate = rate;
  auto n = static_cast<std::size_t>(seconds * rate);
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    w.samples[i] =
        amplitude * std::sin(2.0 * M_PI * freq * static_cast<double>(i) /
                             static_cast<double>(rate));
  return w;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline uint64_t fnv1a(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// 53-bit uniform in [0, 1), independent of std distribution quirks.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Random probability vector of the given size (strictly positive entries).
inline std::vector<double> random_dist(std::mt19937_64& rng, int size) {
  std::vector<double> d(static_cast<std::size_t>(size));
  double sum = 0.0;
  for (double& v : d) {
    v = uniform01(rng) + 1e-6;
    sum += v;
  }
  for (double& v : d) v /= sum;
  return d;
}

}  // namespace testutil

#endif  // VQTTS_TESTS_TEST_UTIL_H_
