// tests/tf_masks_test.cc

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

#include "bam/masks.h"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "bam/corpus.h"
#include "bam/fft.h"
#include "bam/gammatone.h"
#include "bam/rng.h"
#include "doctest.h"

namespace bam {
namespace {

AudioBuffer tone(double freq, double seconds, int rate, double amp = 0.5) {
  AudioBuffer buf;
  buf.sample_rate = rate;
  buf.samples.resize(static_cast<std::size_t>(seconds * rate));
  for (std::size_t i = 0; i < buf.samples.size(); ++i) {
    buf.samples[i] = amp * std::sin(2.0 * M_PI * freq * i / rate);
  }
  return buf;
}

AudioBuffer white(std::uint64_t seed, std::size_t n, int rate) {
  Rng rng(seed);
  AudioBuffer buf;
  buf.sample_rate = rate;
  buf.samples.resize(n);
  for (auto &s : buf.samples) s = 0.2 * rng.gaussian();
  return buf;
}

double energy(const std::vector<double> &x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

TFGrid make_grid(std::vector<std::vector<double>> energies, int rate = 16000) {
  TFGrid g;
  g.energies = std::move(energies);
  g.sample_rate = rate;
  return g;
}

TEST_CASE("ERB center frequencies are equally spaced with exact endpoints") {
  const std::vector<double> freqs = erb_center_frequencies(64, 50.0, 8000.0);
  REQUIRE(freqs.size() == 64);
  CHECK(freqs[0] == 50.0);
  CHECK(freqs[63] == 8000.0);
  for (std::size_t i = 1; i < freqs.size(); ++i) {
    CHECK(freqs[i] > freqs[i - 1]);
  }
  const double step = (erb_rate(8000.0) - erb_rate(50.0)) / 63.0;
  for (std::size_t i = 1; i < freqs.size(); ++i) {
    CHECK(std::fabs(erb_rate(freqs[i]) - erb_rate(freqs[i - 1]) - step) <=
          1e-9);
  }

  const std::vector<double> two = erb_center_frequencies(2, 100.0, 5000.0);
  CHECK(two[0] == 100.0);
  CHECK(two[1] == 5000.0);

  CHECK_THROWS_AS(erb_center_frequencies(1, 50.0, 8000.0), ArgError);
  CHECK_THROWS_AS(erb_center_frequencies(8, 0.0, 8000.0), ArgError);
  CHECK_THROWS_AS(erb_center_frequencies(8, 500.0, 100.0), ArgError);
}

TEST_CASE("ERB rate and its inverse round-trip") {
  for (double f : {50.0, 133.7, 1000.0, 4000.0, 8000.0}) {
    CHECK(erb_rate_inverse(erb_rate(f)) == doctest::Approx(f).epsilon(1e-12));
  }
  // Spot value of the rate scale.
  CHECK(erb_rate(1000.0) ==
        doctest::Approx(21.4 * std::log10(5.37)).epsilon(1e-12));
}

TEST_CASE("bank construction enforces the Nyquist bound") {
  CHECK_THROWS_AS(GammatoneBank(64, 50.0, 8000.0, 16000), ArgError);
  CHECK_NOTHROW(GammatoneBank(64, 50.0, 8000.0, 32000));
  CHECK_NOTHROW(GammatoneBank(64, 50.0, 7600.0, 16000));
  CHECK_THROWS_AS(GammatoneBank(1, 50.0, 7600.0, 16000), ArgError);
}

TEST_CASE("a pure tone peaks in its own channel") {
  const GammatoneBank bank(32, 100.0, 6000.0, 16000);
  const int target = 17;
  const double fc = bank.center_freqs()[target];
  const ChannelSignals channels = gammatone_analyze(tone(fc, 0.5, 16000), bank);

  int best = -1;
  double best_rms = -1.0;
  for (int ch = 0; ch < bank.n_channels(); ++ch) {
    // Skip the onset transient when ranking.
    double e = 0.0;
    for (std::size_t i = 2000; i < channels.rows[ch].size(); ++i) {
      e += channels.rows[ch][i] * channels.rows[ch][i];
    }
    if (e > best_rms) {
      best_rms = e;
      best = ch;
    }
  }
  CHECK(best == target);

  // Near-unity passband gain: steady-state output amplitude close to input.
  double peak = 0.0;
  for (std::size_t i = 4000; i < channels.rows[target].size(); ++i) {
    peak = std::max(peak, std::fabs(channels.rows[target][i]));
  }
  CHECK(peak == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("degenerate analysis inputs behave") {
  const GammatoneBank bank(16, 100.0, 6000.0, 16000);

  AudioBuffer zeros;
  zeros.sample_rate = 16000;
  zeros.samples.assign(4000, 0.0);
  const ChannelSignals silent = gammatone_analyze(zeros, bank);
  for (const auto &row : silent.rows) {
    CHECK(energy(row) == 0.0);
  }

  AudioBuffer impulse = zeros;
  impulse.samples[100] = 1.0;
  const ChannelSignals rung = gammatone_analyze(impulse, bank);
  for (const auto &row : rung.rows) {
    CHECK(energy(row) > 0.0);
  }

  AudioBuffer wrong_rate = zeros;
  wrong_rate.sample_rate = 8000;
  CHECK_THROWS_AS(gammatone_analyze(wrong_rate, bank), ArgError);
}

TEST_CASE("tf energies scale quadratically and count frames correctly") {
  ChannelSignals channels;
  channels.sample_rate = 16000;
  channels.rows = {std::vector<double>(3200, 1.0),
                   std::vector<double>(3200, 2.0),
                   std::vector<double>(3200, 0.0)};

  const TFGrid grid = tf_energy(channels);  // 320-sample win, 160 hop
  REQUIRE(grid.n_channels() == 3);
  CHECK(grid.n_frames() == (3200 - 320) / 160 + 1);

  for (std::size_t f = 0; f < grid.n_frames(); ++f) {
    CHECK(grid.energies[0][f] > 0.0);
    // Constant level 2 vs level 1: exactly the squared ratio.
    CHECK(grid.energies[1][f] ==
          doctest::Approx(4.0 * grid.energies[0][f]).epsilon(1e-12));
    CHECK(grid.energies[2][f] == 0.0);
  }

  // Doubling a real signal quadruples every entry.
  ChannelSignals noise;
  noise.sample_rate = 16000;
  noise.rows.assign(1, std::vector<double>(2000));
  Rng rng(3);
  for (auto &v : noise.rows[0]) v = rng.gaussian();
  ChannelSignals doubled = noise;
  for (auto &v : doubled.rows[0]) v *= 2.0;
  const TFGrid g1 = tf_energy(noise);
  const TFGrid g2 = tf_energy(doubled);
  for (std::size_t f = 0; f < g1.n_frames(); ++f) {
    CHECK(g2.energies[0][f] ==
          doctest::Approx(4.0 * g1.energies[0][f]).epsilon(1e-12));
  }

  // Shorter than one window: a single zero-padded frame.
  ChannelSignals shorty;
  shorty.sample_rate = 16000;
  shorty.rows.assign(1, std::vector<double>(100, 1.0));
  CHECK(tf_energy(shorty).n_frames() == 1);

  CHECK_THROWS_AS(tf_energy(channels, 10.0, 20.0), ArgError);  // win < hop
}

TEST_CASE("IBM keeps units whose local SNR clears the criterion") {
  const TFGrid clean = make_grid({{1.0, 2.0}, {0.0, 3.0}});
  const TFGrid silence = make_grid({{0.0, 0.0}, {0.0, 0.0}});

  const BinaryMask all = ibm_compute_lc(clean, silence, 0.0);
  CHECK(all.bits[0][0] == 1);
  CHECK(all.bits[0][1] == 1);
  CHECK(all.bits[1][0] == 0);  // zero clean energy never kept
  CHECK(all.bits[1][1] == 1);

  const BinaryMask none = ibm_compute_lc(silence, clean, 0.0);
  for (const auto &row : none.bits) {
    for (auto b : row) CHECK(b == 0);
  }

  // Exact tie at the criterion: strict inequality gives 0.
  const double lc_db = 3.0;
  const double ratio = std::pow(10.0, lc_db / 10.0);
  const TFGrid noise = make_grid({{1.0, 1.0}, {1.0, 1.0}});
  const TFGrid at_lc = make_grid({{ratio * 1.0, ratio * 1.0 + 1e-9},
                                  {ratio * 1.0 - 1e-9, 0.0}});
  const BinaryMask tie = ibm_compute_lc(at_lc, noise, lc_db);
  CHECK(tie.bits[0][0] == 0);  // exactly at LC
  CHECK(tie.bits[0][1] == 1);  // just above
  CHECK(tie.bits[1][0] == 0);  // just below
  CHECK(tie.bits[1][1] == 0);

  // Relative-criterion convenience: LC = mixture SNR + RC.
  const BinaryMask rel = ibm_compute(at_lc, noise, 8.0, -5.0);
  for (std::size_t ch = 0; ch < 2; ++ch) {
    for (std::size_t f = 0; f < 2; ++f) {
      CHECK(rel.bits[ch][f] == tie.bits[ch][f]);
    }
  }

  const TFGrid bad = make_grid({{1.0}});
  CHECK_THROWS_AS(ibm_compute_lc(clean, bad, 0.0), ArgError);
}

TEST_CASE("raising the criterion never adds IBM units") {
  Rng rng(11);
  std::vector<std::vector<double>> ec(8, std::vector<double>(40));
  std::vector<std::vector<double>> en(8, std::vector<double>(40));
  for (auto &row : ec) {
    for (auto &v : row) v = rng.uniform() < 0.1 ? 0.0 : rng.uniform() * 10.0;
  }
  for (auto &row : en) {
    for (auto &v : row) v = rng.uniform() < 0.1 ? 0.0 : rng.uniform() * 10.0;
  }
  const TFGrid clean = make_grid(ec);
  const TFGrid noise = make_grid(en);
  const BinaryMask loose = ibm_compute(clean, noise, 0.0, -10.0);
  const BinaryMask base = ibm_compute(clean, noise, 0.0, -5.0);
  const BinaryMask tight = ibm_compute(clean, noise, 0.0, 0.0);
  for (std::size_t ch = 0; ch < 8; ++ch) {
    for (std::size_t f = 0; f < 40; ++f) {
      CHECK(base.bits[ch][f] <= loose.bits[ch][f]);
      CHECK(tight.bits[ch][f] <= base.bits[ch][f]);
    }
  }
}

TEST_CASE("TBM covers the requested share of clean energy per channel") {
  // Full coverage keeps every energetic unit.
  const TFGrid clean = make_grid({{5.0, 0.0, 1.0, 3.0}});
  const TFGrid ssn = make_grid({{1.0, 1.0, 1.0, 1.0}});
  const BinaryMask full = tbm_compute(clean, ssn, 1.0);
  CHECK(full.bits[0][0] == 1);
  CHECK(full.bits[0][1] == 0);
  CHECK(full.bits[0][2] == 1);
  CHECK(full.bits[0][3] == 1);

  // A single energetic unit is exactly what gets kept.
  const TFGrid lone = make_grid({{0.0, 7.0, 0.0}});
  const TFGrid ref = make_grid({{1.0, 1.0, 1.0}});
  const BinaryMask single = tbm_compute(lone, ref, 0.99);
  CHECK(single.bits[0][0] == 0);
  CHECK(single.bits[0][1] == 1);
  CHECK(single.bits[0][2] == 0);

  // 99/1 split at 99% coverage: the dominant unit suffices.
  const TFGrid split = make_grid({{99.0, 1.0}});
  const TFGrid flat = make_grid({{1.0, 1.0}});
  const BinaryMask greedy = tbm_compute(split, flat, 0.99);
  CHECK(greedy.bits[0][0] == 1);
  CHECK(greedy.bits[0][1] == 0);

  // All-zero channel stays all-zero.
  const TFGrid dead = make_grid({{0.0, 0.0, 0.0}});
  const BinaryMask none = tbm_compute(dead, ref, 0.99);
  for (auto b : none.bits[0]) CHECK(b == 0);

  CHECK_THROWS_AS(tbm_compute(clean, ssn, 0.0), ArgError);
  CHECK_THROWS_AS(tbm_compute(clean, ssn, 1.5), ArgError);
  CHECK_THROWS_AS(tbm_compute(clean, make_grid({{1.0}}), 0.99), ArgError);
}

TEST_CASE("TBM coverage invariant holds on random grids") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n_frames = 30 + static_cast<std::size_t>(rng.uniform() * 40);
    std::vector<std::vector<double>> ec(6, std::vector<double>(n_frames));
    std::vector<std::vector<double>> en(6, std::vector<double>(n_frames));
    for (auto &row : ec) {
      for (auto &v : row) v = rng.uniform() < 0.2 ? 0.0 : rng.uniform() * 5.0;
    }
    for (auto &row : en) {
      for (auto &v : row) v = rng.uniform() < 0.1 ? 0.0 : rng.uniform() * 5.0;
    }
    const double coverage = 0.9 + 0.09 * rng.uniform();
    const BinaryMask mask = tbm_compute(make_grid(ec), make_grid(en), coverage);
    for (std::size_t ch = 0; ch < ec.size(); ++ch) {
      double total = 0.0, kept = 0.0;
      for (std::size_t f = 0; f < n_frames; ++f) {
        total += ec[ch][f];
        if (mask.bits[ch][f]) kept += ec[ch][f];
      }
      if (total > 0.0) {
        CHECK(kept >= coverage * total * (1.0 - 1e-12));
      }
    }
  }
}

TEST_CASE("all-ones resynthesis reconstructs speech-like input") {
  const AudioBuffer speech = corpus::utterance(31, 1.5);
  const GammatoneBank bank(64, 50.0, 7600.0, 16000);
  const ChannelSignals channels = gammatone_analyze(speech, bank);

  BinaryMask ones;
  const TFGrid grid = tf_energy(channels);
  ones.win_ms = grid.win_ms;
  ones.hop_ms = grid.hop_ms;
  ones.sample_rate = grid.sample_rate;
  ones.bits.assign(grid.n_channels(),
                   std::vector<std::uint8_t>(grid.n_frames(), 1));

  const AudioBuffer recon = mask_resynthesize(channels, ones, bank);
  REQUIRE(recon.samples.size() == speech.samples.size());
  double err = 0.0;
  for (std::size_t i = 0; i < speech.samples.size(); ++i) {
    const double d = speech.samples[i] - recon.samples[i];
    err += d * d;
  }
  const double snr_db = 10.0 * std::log10(energy(speech.samples) / err);
  CHECK(snr_db >= 15.0);

  // All-zeros wipes the output completely.
  BinaryMask zeros = ones;
  for (auto &row : zeros.bits) std::fill(row.begin(), row.end(), 0);
  const AudioBuffer nothing = mask_resynthesize(channels, zeros, bank);
  CHECK(energy(nothing.samples) == 0.0);
}

TEST_CASE("complementary masks sum to the all-ones reconstruction") {
  const AudioBuffer noise = white(41, 16000, 16000);
  const GammatoneBank bank(24, 80.0, 7000.0, 16000);
  const ChannelSignals channels = gammatone_analyze(noise, bank);
  const TFGrid grid = tf_energy(channels);

  BinaryMask a;
  a.win_ms = grid.win_ms;
  a.hop_ms = grid.hop_ms;
  a.sample_rate = grid.sample_rate;
  a.bits.assign(grid.n_channels(),
                std::vector<std::uint8_t>(grid.n_frames(), 0));
  Rng rng(55);
  for (auto &row : a.bits) {
    for (auto &b : row) b = rng.uniform() < 0.5 ? 1 : 0;
  }
  BinaryMask b = a;
  for (auto &row : b.bits) {
    for (auto &bit : row) bit = bit ? 0 : 1;
  }
  BinaryMask ones = a;
  for (auto &row : ones.bits) std::fill(row.begin(), row.end(), 1);

  const AudioBuffer ya = mask_resynthesize(channels, a, bank);
  const AudioBuffer yb = mask_resynthesize(channels, b, bank);
  const AudioBuffer yall = mask_resynthesize(channels, ones, bank);

  double peak = 0.0;
  for (double v : yall.samples) peak = std::max(peak, std::fabs(v));
  for (std::size_t i = 0; i < yall.samples.size(); ++i) {
    CHECK(std::fabs(ya.samples[i] + yb.samples[i] - yall.samples[i]) <=
          1e-9 * std::max(peak, 1.0));
  }
}

TEST_CASE("single-channel mask confines energy to that channel's band") {
  const AudioBuffer noise = white(67, 32768, 16000);
  const GammatoneBank bank(24, 80.0, 7000.0, 16000);
  const ChannelSignals channels = gammatone_analyze(noise, bank);
  const TFGrid grid = tf_energy(channels);

  const int keep = 12;
  const double fc = bank.center_freqs()[keep];
  BinaryMask mask;
  mask.win_ms = grid.win_ms;
  mask.hop_ms = grid.hop_ms;
  mask.sample_rate = grid.sample_rate;
  mask.bits.assign(grid.n_channels(),
                   std::vector<std::uint8_t>(grid.n_frames(), 0));
  std::fill(mask.bits[keep].begin(), mask.bits[keep].end(), 1);

  const AudioBuffer out = mask_resynthesize(channels, mask, bank);
  const auto spec = rfft(out.samples, 32768);
  const double bin_hz = 16000.0 / 32768;
  double in_band = 0.0, out_band = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double f = k * bin_hz;
    const double p = std::norm(spec[k]);
    if (f >= fc / 1.5 && f <= fc * 1.5) {
      in_band += p;
    } else {
      out_band += p;
    }
  }
  CHECK(10.0 * std::log10(in_band / out_band) >= 20.0);
}

TEST_CASE("mask dump is line-per-channel with a geometry header") {
  BinaryMask mask;
  mask.sample_rate = 16000;
  mask.bits = {{1, 0, 1}, {0, 0, 1}};
  const std::string path = "mask_dump_test.txt";
  write_mask(path, mask);

  std::ifstream f(path);
  REQUIRE(f.good());
  std::string header, row0, row1, extra;
  std::getline(f, header);
  std::getline(f, row0);
  std::getline(f, row1);
  CHECK(!std::getline(f, extra));
  CHECK(header ==
        "# n_channels=2 n_frames=3 win_ms=20 hop_ms=10 sample_rate=16000");
  CHECK(row0 == "101");
  CHECK(row1 == "001");
  std::remove(path.c_str());
}

}  // namespace
}  // namespace bam
