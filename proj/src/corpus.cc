// src/corpus.cc

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

#include "bam/corpus.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "bam/fft.h"
#include "bam/rng.h"

namespace bam::corpus {

namespace {

// Two-pole resonator, direct form. Coefficients may be retuned per sample
// for formant glides; state is kept across retunes.
class Resonator {
 public:
  void Tune(double fc_hz, double bw_hz, double sample_rate) {
    const double r = std::exp(-M_PI * bw_hz / sample_rate);
    const double theta = 2.0 * M_PI * fc_hz / sample_rate;
    a1_ = 2.0 * r * std::cos(theta);
    a2_ = -r * r;
    // Unity gain at the resonance peak (approximately).
    gain_ = (1.0 - r) * std::sqrt(1.0 - 2.0 * r * std::cos(2.0 * theta) + r * r);
  }

  double Tick(double x) {
    const double y = gain_ * x + a1_ * y1_ + a2_ * y2_;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

  void Reset() { y1_ = y2_ = 0.0; }

 private:
  double a1_ = 0.0, a2_ = 0.0, gain_ = 1.0;
  double y1_ = 0.0, y2_ = 0.0;
};

struct Formants {
  double f1, f2;
};

// Rough adult-male formant targets for five vowel qualities.
constexpr Formants kVowels[] = {
    {730.0, 1090.0},   // a
    {530.0, 1840.0},   // e
    {270.0, 2290.0},   // i
    {570.0, 840.0},    // o
    {300.0, 870.0},    // u
};
constexpr int kNumVowels = static_cast<int>(sizeof(kVowels) / sizeof(kVowels[0]));

// Bandwidths are wide enough that the resonances decay away between glottal
// pulses; voiced stretches then carry the pulsatile (sparse) amplitude
// profile of pressed phonation rather than a quasi-sinusoid.
constexpr double kF1Bw = 220.0;
constexpr double kF2Bw = 280.0;

void peak_normalize(std::vector<double> *x, double peak) {
  double m = 0.0;
  for (double v : *x) m = std::max(m, std::abs(v));
  if (m <= 0.0) return;
  const double g = peak / m;
  for (double &v : *x) v *= g;
}

// Internal utterance generator; pause_prob lets babble talkers speak almost
// continuously while the public utterance keeps natural inter-word gaps.
AudioBuffer utterance_impl(std::uint64_t seed, double seconds, int sample_rate,
                           double pause_prob) {
  if (seconds <= 0.0 || sample_rate <= 0) {
    throw ArgError("utterance: seconds and sample_rate must be positive");
  }
  const std::size_t total = static_cast<std::size_t>(seconds * sample_rate);
  std::vector<double> out(total, 0.0);
  Rng rng(seed);

  Resonator r1, r2;
  Formants prev = kVowels[static_cast<int>(rng.uniform() * kNumVowels) % kNumVowels];
  const double f0_start = 130.0 + 15.0 * rng.uniform();

  std::size_t n = 0;
  bool first = true;
  while (n < total) {
    // Inter-word gaps carry a large share of the duration so that, as in
    // recorded speech, the active stretches sit well above the whole-file
    // RMS that SNR mixing is referenced to.
    if (!first && rng.uniform() < pause_prob) {
      n += static_cast<std::size_t>((0.10 + 0.30 * rng.uniform()) * sample_rate);
      if (n >= total) break;
    }
    first = false;

    // Lexical stress: syllable loudness swings over ~10 dB across a phrase.
    const double stress = 0.55 + 1.15 * rng.uniform();

    // Optional plosive onset: a few-millisecond burst well above the vowel
    // level, as a stop release would leave. These spikes dominate the file
    // peak and give the corpus a speech-like crest factor.
    if (rng.uniform() < 0.45) {
      const std::size_t burst =
          static_cast<std::size_t>((0.004 + 0.006 * rng.uniform()) * sample_rate);
      Resonator pop;
      pop.Tune(1200.0 + 1800.0 * rng.uniform(), 500.0, sample_rate);
      const double amp = stress * (2.2 + 1.4 * rng.uniform());
      for (std::size_t j = 0; j < burst && n < total; ++j, ++n) {
        const double exc = (j < 2 ? 1.0 : 0.0) + 0.3 * rng.gaussian();
        const double env = 1.0 - static_cast<double>(j) / burst;
        out[n] += amp * env * pop.Tick(exc);
      }
      n += static_cast<std::size_t>(0.01 * sample_rate);  // closure gap
      if (n >= total) break;
    }

    // Optional fricative onset: short band-limited noise burst.
    if (rng.uniform() < 0.35) {
      const std::size_t burst =
          static_cast<std::size_t>((0.04 + 0.05 * rng.uniform()) * sample_rate);
      Resonator fric;
      fric.Tune(2800.0 + 2400.0 * rng.uniform(), 900.0, sample_rate);
      for (std::size_t j = 0; j < burst && n < total; ++j, ++n) {
        const double env = std::sin(M_PI * (j + 0.5) / burst);
        out[n] += stress * 0.12 * env * fric.Tick(rng.gaussian());
      }
    }
    if (n >= total) break;

    const Formants target = kVowels[static_cast<int>(rng.uniform() * kNumVowels) % kNumVowels];
    const std::size_t dur =
        static_cast<std::size_t>((0.18 + 0.14 * rng.uniform()) * sample_rate);
    const std::size_t glide = static_cast<std::size_t>(0.05 * sample_rate);
    const std::size_t attack = static_cast<std::size_t>(0.025 * sample_rate);
    const std::size_t release = static_cast<std::size_t>(0.035 * sample_rate);

    r1.Reset();
    r2.Reset();
    std::size_t next_pulse = 0;
    double pulse_amp = 0.0;
    for (std::size_t j = 0; j < dur && n < total; ++j, ++n) {
      // Pitch declination across the whole utterance plus per-period jitter.
      const double pos_all = static_cast<double>(n) / total;
      double excitation = 0.004 * rng.gaussian();  // aspiration floor
      if (j >= next_pulse) {
        const double f0 = f0_start * (1.0 - 0.25 * pos_all) *
                          (1.0 + 0.02 * (2.0 * rng.uniform() - 1.0));
        next_pulse = j + static_cast<std::size_t>(
                             std::max(2.0, std::round(sample_rate / f0)));
        pulse_amp = 0.9 + 0.2 * rng.uniform();
        excitation += pulse_amp;
      }
      const double g = glide > 0 ? std::min(1.0, static_cast<double>(j) / glide) : 1.0;
      r1.Tune(prev.f1 + g * (target.f1 - prev.f1), kF1Bw, sample_rate);
      r2.Tune(prev.f2 + g * (target.f2 - prev.f2), kF2Bw, sample_rate);

      // Syllable contour: quiet flanks, loud vowel core. The core-to-edge
      // contrast keeps local SNR high during nuclei even in poor mixtures.
      double env = (0.55 + 0.45 * std::sin(M_PI * (j + 0.5) / dur)) *
                   (1.0 - 0.15 * (static_cast<double>(j) / dur));
      if (j < attack) env *= 0.5 * (1.0 - std::cos(M_PI * j / attack));
      if (dur - j <= release) {
        env *= 0.5 * (1.0 - std::cos(M_PI * (dur - j) / release));
      }
      out[n] += stress * env * (r1.Tick(excitation) + 0.6 * r2.Tick(excitation));
    }
    prev = target;
  }

  // Recording-style noise floor (~-35 dB re peak). Inter-word gaps in real
  // corpora are never digitally silent; a floor keeps gap frames inside the
  // dynamic range that envelope-based intelligibility scoring evaluates.
  double pre_peak = 0.0;
  for (double v : out) pre_peak = std::max(pre_peak, std::abs(v));
  if (pre_peak > 0.0) {
    for (double &v : out) v += 0.018 * pre_peak * rng.gaussian();
  }
  peak_normalize(&out, 0.9);
  AudioBuffer buf;
  buf.samples = std::move(out);
  buf.sample_rate = sample_rate;
  return buf;
}

}  // namespace

AudioBuffer vowel_sequence(std::uint64_t seed, const VowelParams &params) {
  if (params.seconds <= 0.0 || params.sample_rate <= 0) {
    throw ArgError("vowel_sequence: seconds and sample_rate must be positive");
  }
  if (params.f0_hz <= 0.0 || params.f0_hz >= params.sample_rate / 4.0) {
    throw ArgError("vowel_sequence: f0_hz out of range");
  }
  if (params.gate_fraction < 0.0 || params.gate_fraction >= 0.8) {
    throw ArgError("vowel_sequence: gate_fraction out of range");
  }
  if (params.phrase_seconds < 0.0 || params.rest_seconds < 0.0 ||
      (params.rest_seconds > 0.0 && params.phrase_seconds <= 0.0)) {
    throw ArgError("vowel_sequence: invalid phrase/rest lengths");
  }
  const int fs = params.sample_rate;
  const std::size_t total = static_cast<std::size_t>(params.seconds * fs);
  const std::size_t period =
      static_cast<std::size_t>(std::lround(fs / params.f0_hz));
  const std::size_t gate =
      static_cast<std::size_t>(std::lround(params.gate_fraction * period));
  const std::size_t ring = period - gate;
  const std::size_t fade = std::min<std::size_t>(12, ring / 4);

  std::vector<double> out(total, 0.0);
  Rng rng(seed);
  Resonator r1, r2;

  const std::size_t seg_len = static_cast<std::size_t>(0.4 * fs);
  const std::size_t phrase = static_cast<std::size_t>(params.phrase_seconds * fs);
  const std::size_t rest = static_cast<std::size_t>(params.rest_seconds * fs);
  std::size_t n = 0;
  while (n < total) {
    if (phrase > 0 && rest > 0) {
      // Phrased mode: phonation runs of `phrase` samples alternate with
      // exactly-silent rests.  The rest is skipped, not faded, so the
      // material has signal-free stretches but no transients of its own.
      const std::size_t pos = n % (phrase + rest);
      if (pos >= phrase) {
        n += std::min(phrase + rest - pos, total - n);
        continue;
      }
    }
    // Rotate vowel quality every seg_len samples.
    const int vi = static_cast<int>((n / std::max<std::size_t>(seg_len, 1)) % kNumVowels);
    r1.Tune(kVowels[vi].f1, kF1Bw, fs);
    r2.Tune(kVowels[vi].f2, kF2Bw, fs);
    r1.Reset();
    r2.Reset();
    const double amp = 0.95 + 0.1 * rng.uniform();
    for (std::size_t j = 0; j < ring && n < total; ++j, ++n) {
      const double x = (j == 0) ? amp : 0.0;
      double y = r1.Tick(x) + 0.6 * r2.Tick(x);
      if (fade > 0 && ring - j <= fade) {
        // Raised-cosine closure; the final weight is exactly zero.
        y *= 0.5 * (1.0 - std::cos(M_PI * (ring - j - 1) / fade));
      }
      out[n] = y;
    }
    // Glottal closure: exact zeros. out is zero-initialized; just skip.
    n += std::min(gate, total - n);
  }

  peak_normalize(&out, params.peak);
  AudioBuffer buf;
  buf.samples = std::move(out);
  buf.sample_rate = fs;
  return buf;
}

AudioBuffer utterance(std::uint64_t seed, double seconds, int sample_rate) {
  return utterance_impl(seed, seconds, sample_rate, 0.75);
}

AudioBuffer babble(std::uint64_t seed, double seconds, int sample_rate) {
  if (seconds <= 0.0 || sample_rate <= 0) {
    throw ArgError("babble: seconds and sample_rate must be positive");
  }
  const std::size_t total = static_cast<std::size_t>(seconds * sample_rate);
  std::vector<double> sum(total, 0.0);
  Rng level_rng(seed);
  constexpr int kTalkers = 6;
  for (int t = 0; t < kTalkers; ++t) {
    // One stream per talker: Gaussian noise carrier under a syllabic
    // envelope (150-350 ms bursts, brief gaps, ~10 dB stress swings).
    Rng rng(Rng::derive(seed, 0x200 + t));
    const double g = std::pow(10.0, (6.0 * level_rng.uniform() - 3.0) / 20.0);
    std::size_t n = 0;
    while (n < total) {
      if (rng.uniform() < 0.3) {
        n += static_cast<std::size_t>((0.05 + 0.10 * rng.uniform()) *
                                      sample_rate);
        if (n >= total) break;
      }
      const std::size_t dur =
          static_cast<std::size_t>((0.15 + 0.20 * rng.uniform()) * sample_rate);
      const double stress = 0.5 + 1.0 * rng.uniform();
      const std::size_t attack = static_cast<std::size_t>(0.03 * sample_rate);
      const std::size_t release = static_cast<std::size_t>(0.05 * sample_rate);
      for (std::size_t j = 0; j < dur && n < total; ++j, ++n) {
        double env = 0.4 + 0.6 * std::sin(M_PI * (j + 0.5) / dur);
        if (j < attack) env *= 0.5 * (1.0 - std::cos(M_PI * j / attack));
        if (dur - j <= release) {
          env *= 0.5 * (1.0 - std::cos(M_PI * (dur - j) / release));
        }
        sum[n] += g * stress * env * rng.gaussian();
      }
    }
  }
  peak_normalize(&sum, 0.9);
  AudioBuffer buf;
  buf.samples = std::move(sum);
  buf.sample_rate = sample_rate;
  return buf;
}

AudioBuffer factory(std::uint64_t seed, double seconds, int sample_rate) {
  if (seconds <= 0.0 || sample_rate <= 0) {
    throw ArgError("factory: seconds and sample_rate must be positive");
  }
  const std::size_t total = static_cast<std::size_t>(seconds * sample_rate);
  Rng rng(seed);

  // Pink-ish base: white noise shaped by 1/sqrt(f) above a 30 Hz corner.
  const std::size_t n_fft = next_fast_fft_size(total);
  std::vector<double> white(n_fft, 0.0);
  for (std::size_t i = 0; i < total; ++i) white[i] = rng.gaussian();
  std::vector<std::complex<double>> spec = rfft(white, n_fft);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double f = static_cast<double>(k) * sample_rate / n_fft;
    spec[k] /= std::sqrt(std::max(f, 30.0));
  }
  std::vector<double> base = irfft(spec, n_fft);
  base.resize(total);
  double rms = 0.0;
  for (double v : base) rms += v * v;
  rms = std::sqrt(rms / std::max<std::size_t>(total, 1));
  if (rms > 0.0) {
    for (double &v : base) v /= rms;
  }

  // Poisson impact bursts: resonant noise with exponential decay.
  constexpr double kImpactsPerSecond = 12.0;
  double t = 0.0;
  while (true) {
    t += -std::log(1.0 - rng.uniform()) / kImpactsPerSecond;
    const std::size_t start = static_cast<std::size_t>(t * sample_rate);
    if (start >= total) break;
    const double fc = 350.0 * std::pow(4500.0 / 350.0, rng.uniform());
    const double tau = (0.002 + 0.010 * rng.uniform()) * sample_rate;  // samples
    const double amp = 3.0 + 5.0 * rng.uniform();
    const std::size_t dur = std::min<std::size_t>(
        static_cast<std::size_t>(6.0 * tau), total - start);
    Resonator res;
    res.Tune(fc, 0.25 * fc, sample_rate);
    for (std::size_t j = 0; j < dur; ++j) {
      base[start + j] += amp * std::exp(-static_cast<double>(j) / tau) *
                         res.Tick(rng.gaussian());
    }
  }

  // Mains hum with slow amplitude modulation.
  const double phase = 2.0 * M_PI * rng.uniform();
  for (std::size_t i = 0; i < total; ++i) {
    const double ts = static_cast<double>(i) / sample_rate;
    const double am = 1.0 + 0.5 * std::sin(2.0 * M_PI * 0.3 * ts + phase);
    base[i] += 0.4 * am *
               (std::sin(2.0 * M_PI * 100.0 * ts) +
                0.5 * std::sin(2.0 * M_PI * 200.0 * ts) +
                0.25 * std::sin(2.0 * M_PI * 300.0 * ts));
  }

  peak_normalize(&base, 0.9);
  AudioBuffer buf;
  buf.samples = std::move(base);
  buf.sample_rate = sample_rate;
  return buf;
}

}  // namespace bam::corpus
