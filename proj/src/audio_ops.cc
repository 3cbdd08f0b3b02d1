// src/audio_ops.cc

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

#include "bam/audio_ops.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "bam/fft.h"
#include "bam/rng.h"

namespace bam {

namespace {

// Modified Bessel function of the first kind, order zero (power series).
double bessel_i0(double x) {
  const double half_sq = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < 64; ++m) {
    term *= half_sq / (static_cast<double>(m) * m);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

// RMS over samples in 10 ms blocks within 40 dB of the loudest block; the
// opt-in "active" level basis for SNR mixing.
double active_rms(const AudioBuffer &buffer) {
  const std::size_t block =
      std::max<std::size_t>(1, static_cast<std::size_t>(
                                   std::lround(0.010 * buffer.sample_rate)));
  std::vector<double> block_rms;
  for (std::size_t start = 0; start < buffer.size(); start += block) {
    const std::size_t len = std::min(block, buffer.size() - start);
    double acc = 0.0;
    for (std::size_t i = start; i < start + len; ++i) {
      acc += buffer.samples[i] * buffer.samples[i];
    }
    block_rms.push_back(std::sqrt(acc / static_cast<double>(len)));
  }
  const double peak =
      *std::max_element(block_rms.begin(), block_rms.end());
  const double floor = peak * 1e-2;  // -40 dB
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t b = 0; b < block_rms.size(); ++b) {
    if (block_rms[b] < floor) continue;
    const std::size_t start = b * block;
    const std::size_t len = std::min(block, buffer.size() - start);
    for (std::size_t i = start; i < start + len; ++i) {
      acc += buffer.samples[i] * buffer.samples[i];
    }
    count += len;
  }
  return count > 0 ? std::sqrt(acc / static_cast<double>(count)) : 0.0;
}

}  // namespace

double rms(const AudioBuffer &buffer) {
  if (buffer.empty()) return 0.0;
  double acc = 0.0;
  for (double s : buffer.samples) acc += s * s;
  return std::sqrt(acc / static_cast<double>(buffer.size()));
}

std::pair<AudioBuffer, double> normalize_peak(const AudioBuffer &buffer) {
  double peak = 0.0;
  for (double s : buffer.samples) peak = std::max(peak, std::fabs(s));
  if (peak == 0.0) {
    throw ArgError("normalize_peak: cannot normalize an all-zero buffer");
  }
  AudioBuffer out;
  out.sample_rate = buffer.sample_rate;
  out.samples.resize(buffer.size());
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    out.samples[i] = buffer.samples[i] / peak;
  }
  return {std::move(out), peak};
}

MixResult mix_at_snr(const AudioBuffer &clean, const AudioBuffer &noise,
                     const MixSpec &spec) {
  if (clean.sample_rate != noise.sample_rate) {
    throw ArgError("mix_at_snr: sample-rate mismatch");
  }
  if (noise.size() < spec.noise_seek + clean.size()) {
    throw ArgError("mix_at_snr: noise too short for requested crop"
                   " (noise is never looped)");
  }

  AudioBuffer crop;
  crop.sample_rate = noise.sample_rate;
  crop.samples.assign(noise.samples.begin() + spec.noise_seek,
                      noise.samples.begin() + spec.noise_seek + clean.size());

  const double clean_level = spec.level_basis == LevelBasis::kActiveRms
                                 ? active_rms(clean)
                                 : rms(clean);
  const double noise_level = rms(crop);
  if (clean_level <= 0.0 || noise_level <= 0.0) {
    throw ArgError("mix_at_snr: silent clean or noise signal");
  }

  const double gain =
      std::pow(10.0, -spec.snr_db / 20.0) * (clean_level / noise_level);

  MixResult out;
  out.scaled_noise.sample_rate = clean.sample_rate;
  out.scaled_noise.samples.resize(clean.size());
  out.mixture.sample_rate = clean.sample_rate;
  out.mixture.samples.resize(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double n = gain * crop.samples[i];
    out.scaled_noise.samples[i] = n;
    out.mixture.samples[i] = clean.samples[i] + n;
  }
  return out;
}

AudioBuffer resample(const AudioBuffer &buffer, int target_rate) {
  if (target_rate <= 0) throw ArgError("resample: target_rate must be > 0");
  if (buffer.sample_rate <= 0) {
    throw ArgError("resample: source rate must be > 0");
  }
  if (target_rate == buffer.sample_rate) return buffer;
  if (buffer.empty()) return AudioBuffer({}, target_rate);

  const int g = std::gcd(buffer.sample_rate, target_rate);
  const int up = target_rate / g;           // L
  const int down = buffer.sample_rate / g;  // M

  // Prototype lowpass at the virtual rate fs*L: cutoff at the tighter of the
  // two Nyquist limits, 64 taps per phase, Kaiser beta = 8. Odd length keeps
  // the filter exactly symmetric about an integer tap.
  const int n_taps = 64 * up + 1;
  const int center = (n_taps - 1) / 2;  // == 32 * up
  const double cutoff = 1.0 / std::max(up, down);
  const double inv_i0_beta = 1.0 / bessel_i0(8.0);
  std::vector<double> h(static_cast<std::size_t>(n_taps));
  for (int k = 0; k < n_taps; ++k) {
    const double t = k - center;
    const double x = cutoff * t;
    const double sinc =
        x == 0.0 ? 1.0 : std::sin(M_PI * x) / (M_PI * x);
    const double frac = t / center;  // in [-1, 1]
    const double w =
        bessel_i0(8.0 * std::sqrt(std::max(0.0, 1.0 - frac * frac))) *
        inv_i0_beta;
    h[static_cast<std::size_t>(k)] = cutoff * sinc * w;
  }
  // Normalize each polyphase branch to unit DC gain: a constant input must
  // come out as the same constant regardless of output phase.
  for (int phase = 0; phase < up; ++phase) {
    double s = 0.0;
    for (int k = phase; k < n_taps; k += up) s += h[static_cast<std::size_t>(k)];
    if (s != 0.0) {
      for (int k = phase; k < n_taps; k += up) h[static_cast<std::size_t>(k)] /= s;
    }
  }

  const auto &x = buffer.samples;
  const long in_len = static_cast<long>(x.size());
  const long out_len = std::lround(static_cast<double>(in_len) * target_rate /
                                   buffer.sample_rate);

  AudioBuffer out;
  out.sample_rate = target_rate;
  out.samples.assign(static_cast<std::size_t>(out_len), 0.0);
  for (long n = 0; n < out_len; ++n) {
    // Output n sits at virtual position n*down; the filter center lands an
    // exact multiple of `up` away, so the phase is (n*down) mod up.
    const long q = n * down;
    const int phase = static_cast<int>(q % up);
    const long base = (q - phase) / up + 32;  // center/up == 32
    double acc = 0.0;
    for (int t = 0; t * up + phase < n_taps; ++t) {
      const long j = base - t;
      if (j < 0) break;
      if (j >= in_len) continue;
      acc += h[static_cast<std::size_t>(t * up + phase)] *
             x[static_cast<std::size_t>(j)];
    }
    out.samples[static_cast<std::size_t>(n)] = acc;
  }
  return out;
}

AudioBuffer generate_ssn(const AudioBuffer &reference, std::size_t length,
                         std::uint64_t seed) {
  if (reference.size() < 4096) {
    throw ArgError("generate_ssn: reference must hold at least 4096 samples");
  }
  if (length < 2) throw ArgError("generate_ssn: length must be >= 2");

  // Welch-averaged magnitude spectrum of the reference: 512-point Hann
  // segments at 50% overlap.
  constexpr int kWin = 512;
  constexpr int kHop = 256;
  constexpr int kBins = kWin / 2 + 1;
  std::vector<double> window(kWin);
  for (int j = 0; j < kWin; ++j) {
    window[static_cast<std::size_t>(j)] =
        0.5 - 0.5 * std::cos(2.0 * M_PI * j / kWin);
  }
  std::vector<double> power(kBins, 0.0);
  std::vector<double> seg(kWin);
  std::size_t n_segments = 0;
  for (std::size_t start = 0; start + kWin <= reference.size();
       start += kHop) {
    for (int j = 0; j < kWin; ++j) {
      seg[static_cast<std::size_t>(j)] =
          reference.samples[start + static_cast<std::size_t>(j)] *
          window[static_cast<std::size_t>(j)];
    }
    const auto spec = rfft(seg, kWin);
    for (int k = 0; k < kBins; ++k) {
      power[static_cast<std::size_t>(k)] += std::norm(spec[static_cast<std::size_t>(k)]);
    }
    ++n_segments;
  }
  std::vector<double> magnitude(kBins);
  for (int k = 0; k < kBins; ++k) {
    magnitude[static_cast<std::size_t>(k)] =
        std::sqrt(power[static_cast<std::size_t>(k)] /
                  static_cast<double>(n_segments));
  }

  // Shape seeded white Gaussian noise by that envelope in the frequency
  // domain, then match the reference RMS.
  Rng rng(seed);
  std::vector<double> noise(length);
  for (auto &s : noise) s = rng.gaussian();
  const int n_fft = static_cast<int>(length);
  auto spec = rfft(noise, n_fft);
  const double bins_ratio =
      static_cast<double>(kWin) / static_cast<double>(length);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    // Fractional position of this bin on the Welch grid, linearly
    // interpolated (both grids span 0..Nyquist of the same rate).
    const double pos =
        std::min(static_cast<double>(k) * bins_ratio,
                 static_cast<double>(kBins - 1));
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min<std::size_t>(lo + 1, kBins - 1);
    const double frac = pos - static_cast<double>(lo);
    spec[k] *= (1.0 - frac) * magnitude[lo] + frac * magnitude[hi];
  }
  AudioBuffer out;
  out.sample_rate = reference.sample_rate;
  out.samples = irfft(spec, n_fft);

  const double target = rms(reference);
  const double current = rms(out);
  if (current > 0.0) {
    const double k = target / current;
    for (auto &s : out.samples) s *= k;
  }
  return out;
}

}  // namespace bam
