// src/stoi.cc

// Copyright 2026  The BAM Toolkit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABILITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "bam/stoi.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "bam/audio_ops.h"
#include "bam/fft.h"
#include "json.hpp"

namespace bam {

namespace {

constexpr int kRate = 10000;      // working sample rate
constexpr int kFrame = 256;       // analysis frame (25.6 ms)
constexpr int kHop = 128;         // 50% overlap
constexpr int kFft = 512;         // zero-padded spectrum size
constexpr int kBands = 15;        // one-third-octave bands
constexpr double kFirstBand = 150.0;
constexpr int kSegment = 30;      // frames per 384 ms envelope segment
constexpr double kDynRange = 40.0;  // silent-frame threshold below max, dB
constexpr double kClipDb = -15.0;   // SDR lower bound

// MATLAB-convention Hann window without zero endpoints.
std::vector<double> hanning(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * (i + 1) / (n + 1)));
  }
  return w;
}

// Drops frames whose windowed clean energy falls kDynRange below the
// loudest frame; both signals are rebuilt by overlap-adding the kept
// windowed frames at the original hop.
void remove_silent_frames(std::vector<double> *x, std::vector<double> *y) {
  const std::vector<double> w = hanning(kFrame);
  const std::size_t len = x->size();
  if (len < static_cast<std::size_t>(kFrame)) {
    throw ArgError("stoi: signal shorter than one analysis frame");
  }
  const std::size_t n_frames = (len - kFrame) / kHop + 1;

  std::vector<double> energy_db(n_frames);
  double max_db = -1e300;
  for (std::size_t f = 0; f < n_frames; ++f) {
    double e = 0.0;
    for (int i = 0; i < kFrame; ++i) {
      const double v = w[i] * (*x)[f * kHop + i];
      e += v * v;
    }
    energy_db[f] = e > 0.0 ? 10.0 * std::log10(e) : -1e300;
    max_db = std::max(max_db, energy_db[f]);
  }

  std::vector<std::size_t> kept;
  for (std::size_t f = 0; f < n_frames; ++f) {
    // Exactly-silent frames are never active, even when the whole signal is
    // silent and the relative threshold would degenerate.
    if (energy_db[f] > -1e300 && energy_db[f] - max_db + kDynRange > 0.0) {
      kept.push_back(f);
    }
  }
  if (kept.empty()) {
    throw ArgError("stoi: no active frames in the clean reference");
  }

  const std::size_t out_len = (kept.size() - 1) * kHop + kFrame;
  std::vector<double> xs(out_len, 0.0), ys(out_len, 0.0);
  for (std::size_t j = 0; j < kept.size(); ++j) {
    const std::size_t src = kept[j] * kHop;
    const std::size_t dst = j * kHop;
    for (int i = 0; i < kFrame; ++i) {
      xs[dst + i] += w[i] * (*x)[src + i];
      ys[dst + i] += w[i] * (*y)[src + i];
    }
  }
  *x = std::move(xs);
  *y = std::move(ys);
}

// One-third-octave band energies: rows of sqrt(sum |X_k|^2) over the band's
// FFT bins, bands edged at cf * 2^{+-1/6} rounded to the nearest bin.
std::vector<std::vector<double>> band_envelope(const std::vector<double> &x) {
  const std::vector<double> w = hanning(kFrame);
  const std::size_t n_frames = (x.size() - kFrame) / kHop + 1;

  std::vector<std::vector<std::size_t>> band_bins(kBands);
  const double bin_hz = static_cast<double>(kRate) / kFft;
  const auto nearest_bin = [&](double f_hz) {
    std::size_t best = 0;
    double best_d = 1e300;
    for (std::size_t k = 0; k <= kFft / 2; ++k) {
      const double d = std::fabs(k * bin_hz - f_hz);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    return best;
  };
  for (int b = 0; b < kBands; ++b) {
    const double cf = kFirstBand * std::pow(2.0, b / 3.0);
    const std::size_t lo = nearest_bin(cf * std::pow(2.0, -1.0 / 6.0));
    const std::size_t hi = nearest_bin(cf * std::pow(2.0, 1.0 / 6.0));
    for (std::size_t k = lo; k < hi; ++k) band_bins[b].push_back(k);
  }

  std::vector<std::vector<double>> env(kBands,
                                       std::vector<double>(n_frames, 0.0));
  std::vector<double> frame(kFrame);
  for (std::size_t f = 0; f < n_frames; ++f) {
    for (int i = 0; i < kFrame; ++i) frame[i] = w[i] * x[f * kHop + i];
    const std::vector<std::complex<double>> spec = rfft(frame, kFft);
    for (int b = 0; b < kBands; ++b) {
      double e = 0.0;
      for (std::size_t k : band_bins[b]) e += std::norm(spec[k]);
      env[b][f] = std::sqrt(e);
    }
  }
  return env;
}

// Pearson correlation; 0 when either side is degenerate.
double correlation(const std::vector<double> &a, const std::vector<double> &b) {
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

StoiScore stoi(const AudioBuffer &clean, const AudioBuffer &processed) {
  validate(clean, "stoi(clean)");
  validate(processed, "stoi(processed)");
  if (clean.duration_s() < 0.5 || processed.duration_s() < 0.5) {
    throw ArgError("stoi: need at least 0.5 s of audio");
  }

  AudioBuffer x = resample(clean, kRate);
  AudioBuffer y = resample(processed, kRate);
  const std::size_t nx = x.samples.size();
  const std::size_t ny = y.samples.size();
  if (nx > ny + 1 || ny > nx + 1) {
    throw ArgError("stoi: signals differ in length by more than one sample");
  }
  const std::size_t n = std::min(nx, ny);
  x.samples.resize(n);
  y.samples.resize(n);

  remove_silent_frames(&x.samples, &y.samples);
  if (x.samples.size() < static_cast<std::size_t>(kFrame + (kSegment - 1) * kHop)) {
    throw ArgError("stoi: too little active signal for one 384 ms segment");
  }

  const std::vector<std::vector<double>> ex = band_envelope(x.samples);
  const std::vector<std::vector<double>> ey = band_envelope(y.samples);
  const std::size_t n_frames = ex[0].size();

  const double clip = 1.0 + std::pow(10.0, kClipDb / 20.0);
  double sum = 0.0;
  std::size_t cells = 0;
  std::vector<double> xs(kSegment), ys(kSegment);
  for (std::size_t m = kSegment - 1; m < n_frames; ++m) {
    for (int b = 0; b < kBands; ++b) {
      double nx2 = 0.0, ny2 = 0.0;
      for (int i = 0; i < kSegment; ++i) {
        xs[i] = ex[b][m - kSegment + 1 + i];
        ys[i] = ey[b][m - kSegment + 1 + i];
        nx2 += xs[i] * xs[i];
        ny2 += ys[i] * ys[i];
      }
      // Per-segment gain normalization, then clipping at -15 dB SDR.
      const double alpha = ny2 > 0.0 ? std::sqrt(nx2 / ny2) : 0.0;
      for (int i = 0; i < kSegment; ++i) {
        ys[i] = std::min(alpha * ys[i], clip * xs[i]);
      }
      sum += correlation(xs, ys);
      ++cells;
    }
  }

  StoiScore score;
  score.value = sum / static_cast<double>(cells);
  return score;
}

StoiScore normalize_score(const StoiScore &score, const StoiScore &reference) {
  if (!(reference.value > 0.0)) {
    throw ArgError("normalize_score: reference score must be positive");
  }
  StoiScore out = score;
  out.normalized_value = std::min(1.0, score.value / reference.value);
  return out;
}

StoiScore stoi_normalized(const AudioBuffer &clean,
                          const AudioBuffer &processed,
                          const StoiScore &reference) {
  return normalize_score(stoi(clean, processed), reference);
}

std::string stoi_to_json(const StoiScore &score) {
  nlohmann::json j;
  j["metric"] = "stoi";
  j["value"] = score.value;
  if (score.normalized_value) {
    j["normalized_value"] = *score.normalized_value;
  }
  return j.dump();
}

}  // namespace bam
