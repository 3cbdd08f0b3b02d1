// src/gammatone.cc

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

#include "bam/gammatone.h"

#include <cmath>

#include "bam/rng.h"

namespace bam {

namespace {

// Bandwidth correction mapping the equivalent rectangular bandwidth of a
// 4th-order gammatone onto its exponential damping parameter:
// a_4 = pi * (2*4-2)! * 2^{-(2*4-2)} / ((4-1)!)^2 = pi * 720 / (64 * 36).
constexpr double kOrder4Erb = M_PI * 720.0 / (64.0 * 36.0);

// Deterministic seed for the least-squares resynthesis-gain calibration.
constexpr std::uint64_t kCalibrationSeed = 0x6A77A;

// Filters x through the channel's 4-fold complex resonator cascade and
// returns the real, gain/phase-normalized response.
std::vector<double> filter_channel(const std::vector<double> &x,
                                   const GammatoneBank::Channel &ch) {
  std::vector<double> row(x.size());
  const std::complex<double> a = ch.coeff;
  std::complex<double> s0, s1, s2, s3;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s0 = x[i] + a * s0;
    s1 = s0 + a * s1;
    s2 = s1 + a * s2;
    s3 = s2 + a * s3;
    row[i] = (ch.gain * s3).real();
  }
  return row;
}

// Sum of the channel rows, each advanced by its channel's latency and
// scaled by its gain.
std::vector<double> aligned_sum(const ChannelSignals &channels,
                                const std::vector<GammatoneBank::Channel> &chs,
                                const std::vector<double> &gains) {
  const std::size_t n = channels.length();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < channels.rows.size(); ++k) {
    const std::vector<double> &row = channels.rows[k];
    const std::size_t shift = static_cast<std::size_t>(chs[k].delay);
    const double g = gains[k];
    for (std::size_t i = 0; i + shift < n; ++i) {
      out[i] += g * row[i + shift];
    }
  }
  return out;
}

// Solves the symmetric positive-definite system G x = b in place (Cholesky).
std::vector<double> solve_spd(std::vector<std::vector<double>> g,
                              std::vector<double> b) {
  const std::size_t n = b.size();
  // Tiny ridge keeps the factorization stable if two channels nearly
  // coincide.
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += g[i][i];
  const double ridge = 1e-12 * trace / n;
  for (std::size_t i = 0; i < n; ++i) g[i][i] += ridge;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = g[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= g[i][k] * g[j][k];
      g[i][j] = i == j ? std::sqrt(s) : s / g[j][j];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] -= g[i][k] * b[k];
    b[i] /= g[i][i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) b[ii] -= g[k][ii] * b[k];
    b[ii] /= g[ii][ii];
  }
  return b;
}

}  // namespace

double erb_rate(double f_hz) {
  return 21.4 * std::log10(1.0 + 0.00437 * f_hz);
}

double erb_rate_inverse(double rate) {
  return (std::pow(10.0, rate / 21.4) - 1.0) / 0.00437;
}

double erb_bandwidth(double f_hz) {
  return 24.7 * (1.0 + 4.37 * f_hz / 1000.0);
}

std::vector<double> erb_center_frequencies(int n, double f_lo_hz,
                                           double f_hi_hz) {
  if (n < 2) throw ArgError("erb_center_frequencies: need n >= 2");
  if (!(f_lo_hz > 0.0) || !(f_lo_hz < f_hi_hz)) {
    throw ArgError("erb_center_frequencies: need 0 < f_lo < f_hi");
  }
  const double e_lo = erb_rate(f_lo_hz);
  const double e_hi = erb_rate(f_hi_hz);
  std::vector<double> freqs(n);
  for (int i = 0; i < n; ++i) {
    const double e = e_lo + (e_hi - e_lo) * i / (n - 1);
    freqs[i] = erb_rate_inverse(e);
  }
  // The round trip through the rate scale wobbles in the last ulps; the
  // endpoints are contractual, so force them.
  freqs[0] = f_lo_hz;
  freqs[n - 1] = f_hi_hz;
  return freqs;
}

GammatoneBank::GammatoneBank(int n_channels, double f_lo_hz, double f_hi_hz,
                             int sample_rate)
    : sample_rate_(sample_rate) {
  if (sample_rate <= 0) throw ArgError("GammatoneBank: sample_rate must be > 0");
  if (!(f_hi_hz < sample_rate / 2.0)) {
    throw ArgError("GammatoneBank: f_hi must be below the Nyquist frequency");
  }
  center_freqs_ = erb_center_frequencies(n_channels, f_lo_hz, f_hi_hz);

  channels_.resize(center_freqs_.size());
  for (std::size_t k = 0; k < center_freqs_.size(); ++k) {
    Channel &ch = channels_[k];
    ch.fc_hz = center_freqs_[k];
    const double beta = 2.0 * M_PI * ch.fc_hz / sample_rate;
    const double bw_hz = 1.019 * erb_bandwidth(ch.fc_hz) / kOrder4Erb;
    const double lambda = std::exp(-2.0 * M_PI * bw_hz / sample_rate);
    ch.coeff = std::polar(lambda, beta);
    // The cascade impulse response is C(n+3,3) * lambda^n * e^{j beta n};
    // its envelope peaks where lambda * (n+4)/(n+1) crosses 1.
    ch.delay = std::max(
        0, static_cast<int>(std::floor((4.0 * lambda - 1.0) / (1.0 - lambda))));
    const double norm = std::pow(1.0 - lambda, kOrder);
    // Unity passband gain (the factor 2 folds the negative-frequency image
    // back in) and zero phase at the envelope peak.
    ch.gain = 2.0 * norm * std::polar(1.0, -beta * ch.delay);
  }

  // Per-channel least-squares gains: fit the delay-aligned channel signals
  // of a seeded broadband probe back to the probe itself. This flattens the
  // ripple of the overlapping bands in the reconstruction sum.
  Rng rng(kCalibrationSeed);
  std::vector<double> probe(static_cast<std::size_t>(sample_rate));
  for (auto &s : probe) s = rng.gaussian();

  const std::size_t n_ch = channels_.size();
  std::vector<std::vector<double>> aligned(n_ch);
  for (std::size_t k = 0; k < n_ch; ++k) {
    const std::vector<double> row = filter_channel(probe, channels_[k]);
    const std::size_t shift = static_cast<std::size_t>(channels_[k].delay);
    aligned[k].assign(probe.size(), 0.0);
    for (std::size_t i = 0; i + shift < probe.size(); ++i) {
      aligned[k][i] = row[i + shift];
    }
  }
  std::vector<std::vector<double>> gram(n_ch, std::vector<double>(n_ch, 0.0));
  std::vector<double> rhs(n_ch, 0.0);
  for (std::size_t a = 0; a < n_ch; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < probe.size(); ++i) {
        s += aligned[a][i] * aligned[b][i];
      }
      gram[a][b] = gram[b][a] = s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < probe.size(); ++i) {
      s += aligned[a][i] * probe[i];
    }
    rhs[a] = s;
  }
  resynth_gains_ = solve_spd(std::move(gram), std::move(rhs));
}

ChannelSignals gammatone_analyze(const AudioBuffer &buffer,
                                 const GammatoneBank &bank) {
  validate(buffer, "gammatone_analyze");
  if (buffer.sample_rate != bank.sample_rate()) {
    throw ArgError("gammatone_analyze: buffer rate differs from bank rate");
  }
  ChannelSignals channels;
  channels.sample_rate = buffer.sample_rate;
  channels.rows.reserve(bank.channels().size());
  for (const GammatoneBank::Channel &ch : bank.channels()) {
    channels.rows.push_back(filter_channel(buffer.samples, ch));
  }
  return channels;
}

AudioBuffer resynthesize_channels(const ChannelSignals &channels,
                                  const GammatoneBank &bank) {
  if (channels.n_channels() != static_cast<std::size_t>(bank.n_channels())) {
    throw ArgError("resynthesize_channels: channel count mismatch");
  }
  if (channels.sample_rate != bank.sample_rate()) {
    throw ArgError("resynthesize_channels: sample rate mismatch");
  }
  AudioBuffer out;
  out.sample_rate = channels.sample_rate;
  out.samples = aligned_sum(channels, bank.channels(), bank.resynth_gains());
  return out;
}

}  // namespace bam
