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

#include "vqtts/dsp.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vqtts {
namespace dsp {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Normalized cross-correlation between the frame starting at `start` and
// the same-length window `lag` samples later. Windows are mean-removed.
// Near the end of the signal both windows shrink to the available overlap.
double ncc_at_lag(const std::vector<double>& x, std::size_t start,
                  std::size_t len, std::size_t lag) {
  std::size_t avail = x.size() - (start + lag);
  std::size_t m = std::min(len, avail);
  if (m < 32) return 0.0;

  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mean_a += x[start + i];
    mean_b += x[start + lag + i];
  }
  mean_a /= static_cast<double>(m);
  mean_b /= static_cast<double>(m);

  double num = 0.0, den_a = 0.0, den_b = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double a = x[start + i] - mean_a;
    double b = x[start + lag + i] - mean_b;
    num += a * b;
    den_a += a * a;
    den_b += b * b;
  }
  double den = std::sqrt(den_a * den_b);
  if (den <= 0.0) return 0.0;
  return num / den;
}

}  // namespace

std::size_t frame_length_samples(const FrameSpec& spec, int sample_rate) {
  return static_cast<std::size_t>(
      std::lround(spec.frame_length_ms * sample_rate / 1000.0));
}

std::size_t frame_shift_samples(const FrameSpec& spec, int sample_rate) {
  return static_cast<std::size_t>(
      std::lround(spec.frame_shift_ms * sample_rate / 1000.0));
}

std::size_t frame_count(std::size_t n_samples, const FrameSpec& spec,
                        int sample_rate) {
  if (spec.frame_length_ms <= 0 || spec.frame_shift_ms <= 0 ||
      spec.frame_shift_ms > spec.frame_length_ms)
    throw std::invalid_argument("invalid frame spec");
  std::size_t len = frame_length_samples(spec, sample_rate);
  std::size_t shift = frame_shift_samples(spec, sample_rate);
  if (len == 0 || shift == 0) throw std::invalid_argument("invalid frame spec");
  if (n_samples < len) throw std::runtime_error("insufficient samples");
  return (n_samples - len) / shift + 1;
}

ProsodyTrack extract_prosody(const Waveform& wave, const FrameSpec& spec,
                             const PitchRange& range,
                             double voicing_threshold) {
  int rate = wave.sample_rate;
  if (!(range.f_min > 0 && range.f_min < range.f_max &&
        range.f_max < rate / 2.0))
    throw std::invalid_argument("invalid pitch range");

  std::size_t T = frame_count(wave.samples.size(), spec, rate);
  std::size_t len = frame_length_samples(spec, rate);
  std::size_t shift = frame_shift_samples(spec, rate);

  std::size_t lag_min = static_cast<std::size_t>(
      std::max(1l, std::lround(rate / range.f_max)));
  std::size_t lag_max =
      static_cast<std::size_t>(std::lround(rate / range.f_min));

  ProsodyTrack out;
  out.frames = Matrix(T, 3);
  out.voiced.assign(T, 0);

  for (std::size_t t = 0; t < T; ++t) {
    std::size_t start = t * shift;

    double sumsq = 0.0;
    for (std::size_t i = 0; i < len; ++i)
      sumsq += wave.samples[start + i] * wave.samples[start + i];
    double rms = std::sqrt(sumsq / static_cast<double>(len));
    out.frames.at(t, 1) = std::log(rms + kLogFloor);

    double best = -2.0;
    std::size_t best_lag = lag_min;
    std::vector<double> scores(lag_max - lag_min + 1, -2.0);
    for (std::size_t lag = lag_min; lag <= lag_max; ++lag) {
      if (start + lag >= wave.samples.size()) break;
      double c = ncc_at_lag(wave.samples, start, len, lag);
      scores[lag - lag_min] = c;
      if (c > best) {
        best = c;
        best_lag = lag;
      }
    }

    // A periodic signal peaks at every multiple of its period, and grid
    // quantization can push a sub-octave peak fractionally above the true
    // one. Prefer the shortest-lag local peak within a small margin of
    // the global maximum.
    for (std::size_t lag = lag_min; lag < best_lag; ++lag) {
      double c = scores[lag - lag_min];
      if (c <= -2.0 || c < best - 0.01) continue;
      double prev = lag > lag_min ? scores[lag - 1 - lag_min] : -2.0;
      double next = lag < lag_max ? scores[lag + 1 - lag_min] : -2.0;
      if (c >= prev && c >= next) {
        best_lag = lag;
        break;
      }
    }

    double pov = std::clamp(best, 0.0, 1.0);
    out.frames.at(t, 2) = pov;
    bool voiced = pov >= voicing_threshold;
    out.voiced[t] = voiced ? 1 : 0;

    if (voiced) {
      // Sub-integer lag via parabolic fit through the peak and neighbours.
      double lag_f = static_cast<double>(best_lag);
      if (best_lag > lag_min && best_lag < lag_max) {
        double cm = scores[best_lag - 1 - lag_min];
        double c0 = scores[best_lag - lag_min];
        double cp = scores[best_lag + 1 - lag_min];
        if (cm > -2.0 && cp > -2.0) {
          double denom = cm - 2.0 * c0 + cp;
          if (std::abs(denom) > 1e-12) {
            double delta = 0.5 * (cm - cp) / denom;
            lag_f += std::clamp(delta, -0.5, 0.5);
          }
        }
      }
      out.frames.at(t, 0) = std::log(rate / lag_f);
    }
  }

  // Fill unvoiced log-pitch: interpolate across gaps, hold at the edges.
  std::vector<std::size_t> voiced_idx;
  for (std::size_t t = 0; t < T; ++t)
    if (out.voiced[t]) voiced_idx.push_back(t);

  if (voiced_idx.empty()) {
    double fallback = std::log(std::sqrt(range.f_min * range.f_max));
    for (std::size_t t = 0; t < T; ++t) out.frames.at(t, 0) = fallback;
    return out;
  }

  for (std::size_t t = 0; t < voiced_idx.front(); ++t)
    out.frames.at(t, 0) = out.frames.at(voiced_idx.front(), 0);
  for (std::size_t t = voiced_idx.back() + 1; t < T; ++t)
    out.frames.at(t, 0) = out.frames.at(voiced_idx.back(), 0);
  for (std::size_t k = 0; k + 1 < voiced_idx.size(); ++k) {
    std::size_t a = voiced_idx[k], b = voiced_idx[k + 1];
    double va = out.frames.at(a, 0), vb = out.frames.at(b, 0);
    for (std::size_t t = a + 1; t < b; ++t) {
      double w = static_cast<double>(t - a) / static_cast<double>(b - a);
      out.frames.at(t, 0) = va + w * (vb - va);
    }
  }
  return out;
}

void fft(std::vector<std::complex<double>>& buf) {
  std::size_t n = buf.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(buf[i], buf[j]);
  }
  for (std::size_t step = 2; step <= n; step <<= 1) {
    double angle = -2.0 * kPi / static_cast<double>(step);
    std::complex<double> w_step(std::cos(angle), std::sin(angle));
    for (std::size_t block = 0; block < n; block += step) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < step / 2; ++k) {
        std::complex<double> u = buf[block + k];
        std::complex<double> v = buf[block + k + step / 2] * w;
        buf[block + k] = u + v;
        buf[block + k + step / 2] = u - v;
        w *= w_step;
      }
    }
  }
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelSpectrogram mel_spectrogram(const Waveform& wave, const FrameSpec& spec,
                               int n_fft, int n_mels) {
  int rate = wave.sample_rate;
  std::size_t T = frame_count(wave.samples.size(), spec, rate);
  std::size_t len = frame_length_samples(spec, rate);
  std::size_t shift = frame_shift_samples(spec, rate);
  if (n_mels < 1) throw std::invalid_argument("n_mels must be positive");
  if (static_cast<std::size_t>(n_fft) < len)
    throw std::invalid_argument("frame longer than n_fft");

  std::vector<double> window(len);
  for (std::size_t i = 0; i < len; ++i)
    window[i] =
        0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) /
                              static_cast<double>(len)));

  std::size_t n_bins = static_cast<std::size_t>(n_fft) / 2 + 1;

  // Triangles on the HTK mel scale with n_mels + 2 equally spaced points.
  std::vector<double> mel_pts(n_mels + 2);
  double mel_max = hz_to_mel(rate / 2.0);
  for (int m = 0; m < n_mels + 2; ++m)
    mel_pts[m] = mel_max * static_cast<double>(m) / (n_mels + 1);
  std::vector<double> hz_pts(n_mels + 2);
  for (int m = 0; m < n_mels + 2; ++m) hz_pts[m] = mel_to_hz(mel_pts[m]);

  Matrix weights(static_cast<std::size_t>(n_mels), n_bins, 0.0);
  for (int m = 0; m < n_mels; ++m) {
    double lo = hz_pts[m], mid = hz_pts[m + 1], hi = hz_pts[m + 2];
    for (std::size_t k = 0; k < n_bins; ++k) {
      double f = static_cast<double>(k) * rate / n_fft;
      if (f > lo && f < mid)
        weights.at(m, k) = (f - lo) / (mid - lo);
      else if (f >= mid && f < hi)
        weights.at(m, k) = (hi - f) / (hi - mid);
    }
  }

  MelSpectrogram out;
  out.n_mels = n_mels;
  out.frames = Matrix(T, static_cast<std::size_t>(n_mels));

  std::vector<std::complex<double>> buf(static_cast<std::size_t>(n_fft));
  std::vector<double> mag(n_bins);
  for (std::size_t t = 0; t < T; ++t) {
    std::size_t start = t * shift;
    std::fill(buf.begin(), buf.end(), std::complex<double>(0.0, 0.0));
    for (std::size_t i = 0; i < len; ++i)
      buf[i] = wave.samples[start + i] * window[i];
    fft(buf);
    for (std::size_t k = 0; k < n_bins; ++k) mag[k] = std::abs(buf[k]);
    for (int m = 0; m < n_mels; ++m) {
      double e = 0.0;
      const double* w = weights.row(static_cast<std::size_t>(m));
      for (std::size_t k = 0; k < n_bins; ++k) e += w[k] * mag[k];
      out.frames.at(t, static_cast<std::size_t>(m)) =
          std::log(std::max(e, kLogFloor));
    }
  }
  return out;
}

Matrix delta_features(const Matrix& track, int window) {
  if (window < 1) throw std::invalid_argument("delta window must be >= 1");
  std::size_t T = track.rows, d = track.cols;
  double denom = 0.0;
  for (int w = 1; w <= window; ++w) denom += static_cast<double>(w) * w;
  denom *= 2.0;

  auto clamp_idx = [&](long i) {
    return static_cast<std::size_t>(
        std::clamp<long>(i, 0, static_cast<long>(T) - 1));
  };
  auto apply = [&](const Matrix& in) {
    Matrix out(T, d);
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t c = 0; c < d; ++c) {
        double acc = 0.0;
        for (int w = 1; w <= window; ++w) {
          double fwd = in.at(clamp_idx(static_cast<long>(t) + w), c);
          double bwd = in.at(clamp_idx(static_cast<long>(t) - w), c);
          acc += w * (fwd - bwd);
        }
        out.at(t, c) = acc / denom;
      }
    return out;
  };

  Matrix d1 = apply(track);
  Matrix d2 = apply(d1);
  Matrix out(T, 3 * d);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t c = 0; c < d; ++c) {
      out.at(t, c) = track.at(t, c);
      out.at(t, d + c) = d1.at(t, c);
      out.at(t, 2 * d + c) = d2.at(t, c);
    }
  return out;
}

NormStats compute_stats(const std::vector<ProsodyTrack>& corpus) {
  if (corpus.empty()) throw std::invalid_argument("empty corpus");
  std::array<double, 3> sum{}, sumsq{};
  std::size_t n = 0;
  for (const auto& track : corpus) {
    std::array<double, 3> tsum{}, tsumsq{};
    for (std::size_t t = 0; t < track.frames.rows; ++t)
      for (std::size_t c = 0; c < 3; ++c) {
        double v = track.frames.at(t, c);
        tsum[c] += v;
        tsumsq[c] += v * v;
      }
    for (std::size_t c = 0; c < 3; ++c) {
      sum[c] += tsum[c];
      sumsq[c] += tsumsq[c];
    }
    n += track.frames.rows;
  }
  if (n == 0) throw std::invalid_argument("empty corpus");

  NormStats stats;
  for (std::size_t c = 0; c < 3; ++c) {
    double mean = sum[c] / static_cast<double>(n);
    double var = sumsq[c] / static_cast<double>(n) - mean * mean;
    if (var <= 0.0) throw std::runtime_error("degenerate dimension");
    stats.mean[c] = mean;
    stats.stddev[c] = std::sqrt(var);
  }
  return stats;
}

ProsodyTrack normalize(const ProsodyTrack& track, const NormStats& stats) {
  ProsodyTrack out = track;
  for (std::size_t t = 0; t < out.frames.rows; ++t)
    for (std::size_t c = 0; c < 3; ++c)
      out.frames.at(t, c) =
          (track.frames.at(t, c) - stats.mean[c]) / stats.stddev[c];
  return out;
}

ProsodyTrack denormalize(const ProsodyTrack& track, const NormStats& stats) {
  ProsodyTrack out = track;
  for (std::size_t t = 0; t < out.frames.rows; ++t)
    for (std::size_t c = 0; c < 3; ++c)
      out.frames.at(t, c) =
          track.frames.at(t, c) * stats.stddev[c] + stats.mean[c];
  return out;
}

}  // namespace dsp
}  // namespace vqtts
