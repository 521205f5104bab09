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

#include "vqtts/prosody.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vqtts/kmeans.h"
#include "vqtts/vq.h"

namespace vqtts {
namespace prosody {

Alignment read_alignment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open alignment: " + path);
  Alignment ali;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty alignment file: " + path);
  {
    std::istringstream hdr(line);
    std::string tag;
    if (!(hdr >> tag >> ali.utt_id >> ali.n_frames) || tag != "utt")
      throw std::runtime_error("bad alignment header: " + path);
  }
  int prev_end = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    PhonemeSegment seg;
    if (!(ls >> seg.phoneme >> seg.start_frame >> seg.end_frame))
      throw std::runtime_error("bad alignment line in " + path + ": " + line);
    if (seg.start_frame < prev_end || seg.start_frame >= seg.end_frame ||
        seg.end_frame > ali.n_frames)
      throw std::runtime_error("alignment segments out of order in " + path);
    prev_end = seg.end_frame;
    ali.segments.push_back(std::move(seg));
  }
  return ali;
}

void write_alignment(const std::string& path, const Alignment& ali) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write alignment: " + path);
  out << "utt " << ali.utt_id << " " << ali.n_frames << "\n";
  for (const auto& seg : ali.segments)
    out << seg.phoneme << " " << seg.start_frame << " " << seg.end_frame
        << "\n";
}

std::vector<double> phoneme_prosody(const Matrix& track9,
                                    const PhonemeSegment& seg) {
  if (seg.start_frame < 0 || seg.start_frame >= seg.end_frame ||
      static_cast<std::size_t>(seg.end_frame) > track9.rows)
    throw std::out_of_range("segment out of range");
  std::vector<double> mean(track9.cols, 0.0);
  for (int t = seg.start_frame; t < seg.end_frame; ++t)
    for (std::size_t c = 0; c < track9.cols; ++c)
      mean[c] += track9.at(static_cast<std::size_t>(t), c);
  double n = static_cast<double>(seg.end_frame - seg.start_frame);
  for (double& v : mean) v /= n;
  return mean;
}

PLProsodyCodebook train_pl_codebook(const Matrix& reprs, int n, uint64_t seed) {
  if (reprs.cols != 9)
    throw std::invalid_argument("representations must be 9-dimensional");
  if (n < 2) throw std::invalid_argument("cluster count must be >= 2");
  kmeans::Result res = kmeans::run(reprs, n, 100, seed);
  PLProsodyCodebook cb;
  cb.n = n;
  cb.seed = seed;
  cb.centroids = std::move(res.centroids);
  return cb;
}

int label(const PLProsodyCodebook& cb, const std::vector<double>& repr) {
  if (repr.size() != cb.centroids.cols)
    throw std::invalid_argument("representation dimension mismatch");
  return kmeans::nearest(cb.centroids, repr.data());
}

std::vector<double> quantized_prosody(const PLProsodyCodebook& cb, int lab) {
  if (lab < 0 || lab >= cb.n) throw std::out_of_range("label out of range");
  const double* row = cb.centroids.row(static_cast<std::size_t>(lab));
  return std::vector<double>(row, row + cb.centroids.cols);
}

void save_pl_codebook(const std::string& path, const PLProsodyCodebook& cb) {
  vq::Codebook wrapped;
  wrapped.groups = 1;
  wrapped.entries_per_group = cb.n;
  wrapped.dim = static_cast<int>(cb.centroids.cols);
  wrapped.seed = cb.seed;
  wrapped.centroids.push_back(cb.centroids);
  vq::save_codebook(path, wrapped);
}

PLProsodyCodebook load_pl_codebook(const std::string& path) {
  vq::Codebook wrapped = vq::load_codebook(path);
  if (wrapped.groups != 1)
    throw std::runtime_error("not a phoneme-level codebook: " + path);
  PLProsodyCodebook cb;
  cb.n = wrapped.entries_per_group;
  cb.seed = wrapped.seed;
  cb.centroids = std::move(wrapped.centroids[0]);
  return cb;
}

}  // namespace prosody
}  // namespace vqtts
