// tests/bam_mask_test.cc

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

#include "bam/bam_mask.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "bam/audio_ops.h"
#include "bam/corpus.h"
#include "bam/rng.h"
#include "doctest.h"

namespace bam {
namespace {

AudioBuffer gaussian_buffer(std::uint64_t seed, std::size_t n, double sigma,
                            int rate = 16000) {
  Rng rng(seed);
  AudioBuffer buf;
  buf.sample_rate = rate;
  buf.samples.resize(n);
  for (auto &s : buf.samples) s = sigma * rng.gaussian();
  return buf;
}

TEST_CASE("target proportion follows the deviation ratio") {
  // 0.2 / 0.4.
  CHECK(std::fabs(target_proportion(0.3, 0.1) - 0.5) <= 1e-12);
  // Pure-noise frame: numerator vanishes.
  CHECK(target_proportion(0.25, 0.25) == 0.0);
  // Noise-free frame.
  CHECK(target_proportion(0.42, 0.0) == 1.0);
  // Silent frame is defined as 0 rather than 0/0.
  CHECK(target_proportion(0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(target_proportion(-0.1, 0.2), ArgError);
  CHECK_THROWS_AS(target_proportion(0.1, -0.2), ArgError);
}

TEST_CASE("adaptive threshold takes the larger bound") {
  CHECK(adaptive_threshold(0.2, 0.5) == 0.5);
  CHECK(adaptive_threshold(0.7, 0.5) == 0.7);
  CHECK(adaptive_threshold(0.3, 0.3) == 0.3);
  CHECK_THROWS_AS(adaptive_threshold(-0.01, 0.5), ArgError);
  CHECK_THROWS_AS(adaptive_threshold(0.2, 1.5), ArgError);
  CHECK_THROWS_AS(adaptive_threshold(0.2, -0.5), ArgError);
}

TEST_CASE("single-frame transform hits all three branches") {
  DateEstimate est;
  est.sigma_hat = 0.1;
  est.y_bq = 0.2;
  BamParams params;  // alpha = 0.35, beta = 0.65

  const std::vector<double> frame = {0.8, 0.3, -0.1};
  auto [out, decision] = apply_mask_frame(frame, est, /*xi_q=*/0.5, params);

  REQUIRE(out.size() == frame.size());
  // Branch 2: 0.8 - 0.35 * 0.1.
  CHECK(std::fabs(out[0] - 0.765) <= 1e-12);
  // Branch 1 passes the sample through verbatim.
  CHECK(out[1] == 0.3);
  // Branch 3: 0.65 * (-0.1).
  CHECK(std::fabs(out[2] - (-0.065)) <= 1e-12);
  CHECK(decision.kept == 1);
  CHECK(decision.subtracted == 1);
  CHECK(decision.floored == 1);
  CHECK(decision.xi_q == 0.5);
  // d_q was not supplied; with xi_q > y_bq it must have been the proportion.
  CHECK(decision.d_q == 0.5);
}

TEST_CASE("over-subtraction clamps at zero instead of flipping sign") {
  DateEstimate est;
  est.sigma_hat = 2.0;  // alpha * sigma_hat = 0.7 exceeds the sample
  est.y_bq = 0.2;
  auto [out, decision] =
      apply_mask_frame({0.6, -0.55}, est, /*xi_q=*/0.5, BamParams());
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 0.0);
  CHECK(decision.subtracted == 2);
}

TEST_CASE("band edges are excluded from the kept branch") {
  DateEstimate est;
  est.sigma_hat = 0.0;
  est.y_bq = 0.2;
  // |x| == xi_q subtracts; |x| == y_bq floors (open interval on both sides).
  auto [out, decision] =
      apply_mask_frame({0.5, 0.2}, est, /*xi_q=*/0.5, BamParams());
  CHECK(decision.kept == 0);
  CHECK(decision.subtracted == 1);
  CHECK(decision.floored == 1);
  CHECK(out[0] == 0.5);          // sigma_hat = 0: subtraction is a no-op
  CHECK(out[1] == 0.65 * 0.2);

  // Degenerate band xi_q == y_bq: the kept interval is empty.
  auto [out2, d2] = apply_mask_frame({0.3, 0.1}, est, /*xi_q=*/0.2, BamParams());
  CHECK(d2.kept == 0);
  CHECK(d2.subtracted + d2.floored == 2);
  CHECK(d2.d_q == 0.0);  // inferred: xi_q did not exceed y_bq
}

TEST_CASE("parameter validation rejects out-of-range factors") {
  DateEstimate est;
  BamParams params;
  params.alpha = -0.1;
  CHECK_THROWS_AS(apply_mask_frame({0.1}, est, 0.5, params), ArgError);
  params.alpha = 0.35;
  params.beta = 1.5;
  CHECK_THROWS_AS(apply_mask_frame({0.1}, est, 0.5, params), ArgError);
  params.beta = 0.65;
  params.frame_ms = 0.0;
  CHECK_THROWS_AS(bam_process(gaussian_buffer(1, 4096, 0.1), params), ArgError);
}

TEST_CASE("pipeline invariants hold on random material") {
  Rng rng(0xB001);
  BamParams params;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 600 + static_cast<std::size_t>(rng.uniform() * 8000);
    AudioBuffer in;
    in.sample_rate = 16000;
    in.samples.resize(n);
    const double sigma = 0.02 + 0.3 * rng.uniform();
    const double tone_amp = rng.uniform() < 0.5 ? 0.5 : 0.0;
    const double omega = 2.0 * M_PI * (200.0 + 600.0 * rng.uniform()) / 16000.0;
    for (std::size_t i = 0; i < n; ++i) {
      in.samples[i] = sigma * rng.gaussian() + tone_amp * std::sin(omega * i);
    }

    auto [out, decisions] = bam_process(in, params);
    REQUIRE(out.samples.size() == in.samples.size());
    CHECK(out.sample_rate == in.sample_rate);

    for (std::size_t i = 0; i < n; ++i) {
      const double x = in.samples[i];
      const double y = out.samples[i];
      // Sign preserved or zeroed, magnitude never expanded.
      CHECK(x * y >= 0.0);
      CHECK(std::fabs(y) <= std::fabs(x));
    }

    std::size_t counted = 0;
    for (const auto &d : decisions) {
      counted += d.kept + d.subtracted + d.floored;
      CHECK(d.d_q >= 0.0);
      CHECK(d.d_q <= 1.0);
      CHECK(d.xi_q == std::max(d.estimate.y_bq, d.d_q));
    }
    CHECK(counted == n);

    // Bit-identical on a second run.
    auto [out2, decisions2] = bam_process(in, params);
    CHECK(out2.samples == out.samples);
    REQUIRE(decisions2.size() == decisions.size());
    for (std::size_t q = 0; q < decisions.size(); ++q) {
      CHECK(decisions2[q].d_q == decisions[q].d_q);
      CHECK(decisions2[q].kept == decisions[q].kept);
    }
  }
}

TEST_CASE("clean gated vowels land in the kept band") {
  // Noise-free synthetic vowels with hard glottal closures: the estimator
  // finds the zero floor (sigma_hat = 0), d_q saturates at 1 and the kept
  // band spans all of (0, 1). An earlier noise-search start is needed so the
  // search can settle inside the closure cluster.
  const AudioBuffer vowels = corpus::vowel_sequence(0xA07);
  BamParams params;
  params.date_policy.t_min_fraction = 0.1;

  auto [out, decisions] = bam_process(vowels, params);
  REQUIRE(!decisions.empty());

  std::size_t kept = 0, total = 0, saturated = 0;
  for (const auto &d : decisions) {
    kept += d.kept;
    total += d.kept + d.subtracted + d.floored;
    if (d.d_q > 0.99) ++saturated;
  }
  CHECK(total == vowels.samples.size());
  // Every frame here is voiced (the closures are far shorter than a frame).
  CHECK(static_cast<double>(kept) / total >= 0.80);
  CHECK(saturated >= decisions.size() * 9 / 10);

  // With sigma_hat = 0 the subtraction branch is a no-op and the flooring
  // branch only sees exact zeros, so the mask is the identity here.
  CHECK(out.samples == vowels.samples);
}

TEST_CASE("stationary noise frames report a small proportion") {
  // On pure Gaussian noise sigma_hat tracks the frame deviation, so d_q
  // stays near 0.
  const AudioBuffer noise = gaussian_buffer(0xD00D, 16000 * 4, 0.1);
  auto [out, decisions] = bam_process(noise, BamParams());
  REQUIRE(decisions.size() >= 100);
  std::size_t small = 0;
  for (const auto &d : decisions) {
    if (d.d_q < 0.2) ++small;
  }
  CHECK(static_cast<double>(small) / decisions.size() >= 0.90);
}

TEST_CASE("speech-dominant frames preserve more than noise-dominant ones") {
  const AudioBuffer clean = corpus::utterance(21, 3.0);
  const AudioBuffer noise = corpus::babble(22, 3.5);
  MixSpec spec;
  spec.snr_db = -6.0;
  const MixResult mixed = mix_at_snr(clean, noise, spec);

  auto [out, decisions] = bam_process(mixed.mixture, BamParams());
  REQUIRE(decisions.size() >= 20);

  std::vector<std::size_t> order(decisions.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return decisions[a].d_q < decisions[b].d_q;
  });

  const std::size_t decile = std::max<std::size_t>(decisions.size() / 10, 1);
  double bottom = 0.0, top = 0.0;
  for (std::size_t i = 0; i < decile; ++i) {
    bottom += static_cast<double>(decisions[order[i]].kept);
    top += static_cast<double>(decisions[order[order.size() - 1 - i]].kept);
  }
  // Frames where the deviation ratio says "speech" keep strictly more
  // samples than the most noise-like frames.
  CHECK(top > bottom);
}

TEST_CASE("silent input is rejected only when normalizing") {
  AudioBuffer silent;
  silent.sample_rate = 16000;
  silent.samples.assign(4096, 0.0);
  CHECK_THROWS_AS(bam_process(silent, BamParams()), ArgError);

  BamParams raw;
  raw.normalize = false;
  auto [out, decisions] = bam_process(silent, raw);
  CHECK(out.samples == silent.samples);
}

TEST_CASE("scale restoration is exact for dyadic gains") {
  // Peak normalization divides decisions and outputs by the same factor; a
  // power-of-two gain therefore reproduces the output bit-exactly scaled.
  const AudioBuffer in = gaussian_buffer(0xABCD, 9000, 0.2);
  AudioBuffer quarter = in;
  for (auto &s : quarter.samples) s *= 0.25;

  auto [out_full, dec_full] = bam_process(in, BamParams());
  auto [out_quarter, dec_quarter] = bam_process(quarter, BamParams());
  REQUIRE(out_full.samples.size() == out_quarter.samples.size());
  for (std::size_t i = 0; i < out_full.samples.size(); ++i) {
    CHECK(out_quarter.samples[i] == 0.25 * out_full.samples[i]);
  }
  REQUIRE(dec_full.size() == dec_quarter.size());
  for (std::size_t q = 0; q < dec_full.size(); ++q) {
    CHECK(dec_full[q].d_q == dec_quarter[q].d_q);
    CHECK(dec_full[q].kept == dec_quarter[q].kept);
  }
}

TEST_CASE("frame length follows frame_ms") {
  const AudioBuffer noise = gaussian_buffer(5, 16000, 0.1);
  BamParams params;
  params.frame_ms = 20.0;  // 320 samples at 16 kHz
  auto [out, decisions] = bam_process(noise, params);
  CHECK(decisions.size() == 50);
  std::size_t first = decisions[0].kept + decisions[0].subtracted +
                      decisions[0].floored;
  CHECK(first == 320);
}

TEST_CASE("diagnostics CSV round-trips the decision rows") {
  const AudioBuffer noise = gaussian_buffer(77, 4096, 0.05);
  auto [out, decisions] = bam_process(noise, BamParams());

  const std::string path = "bam_diag_test.csv";
  write_diagnostics_csv(path, decisions);

  std::ifstream f(path);
  REQUIRE(f.good());
  std::string header;
  std::getline(f, header);
  CHECK(header ==
        "frame_index,sigma_ny,sigma_hat,d_q,y_bq,xi_q,kept,subtracted,floored");

  std::size_t rows = 0;
  std::string line;
  while (std::getline(f, line)) {
    std::istringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 9);
    const auto &d = decisions[rows];
    CHECK(std::stoul(fields[0]) == rows);
    // %.17g round-trips doubles exactly.
    CHECK(std::stod(fields[1]) == d.sigma_ny);
    CHECK(std::stod(fields[2]) == d.estimate.sigma_hat);
    CHECK(std::stod(fields[3]) == d.d_q);
    CHECK(std::stod(fields[4]) == d.estimate.y_bq);
    CHECK(std::stod(fields[5]) == d.xi_q);
    CHECK(std::stoul(fields[6]) == d.kept);
    CHECK(std::stoul(fields[7]) == d.subtracted);
    CHECK(std::stoul(fields[8]) == d.floored);
    ++rows;
  }
  CHECK(rows == decisions.size());
  std::remove(path.c_str());
}

TEST_CASE("synthetic corpus generators are deterministic and bounded") {
  const AudioBuffer u1 = corpus::utterance(123, 1.5);
  const AudioBuffer u2 = corpus::utterance(123, 1.5);
  CHECK(u1.samples == u2.samples);
  const AudioBuffer u3 = corpus::utterance(124, 1.5);
  CHECK(u1.samples != u3.samples);

  for (const AudioBuffer &b :
       {corpus::vowel_sequence(1), corpus::utterance(2, 1.0),
        corpus::babble(3, 1.0), corpus::factory(4, 1.0)}) {
    REQUIRE(!b.samples.empty());
    double peak = 0.0;
    for (double s : b.samples) peak = std::max(peak, std::fabs(s));
    CHECK(peak <= 0.9000000001);
    CHECK(peak >= 0.5);
  }

  // The gated vowels really contain exact zeros in every analysis frame.
  const AudioBuffer vowels = corpus::vowel_sequence(9);
  const std::size_t frame = 512;
  for (std::size_t start = 0; start + frame <= vowels.samples.size();
       start += frame) {
    std::size_t zeros = 0;
    for (std::size_t i = start; i < start + frame; ++i) {
      if (vowels.samples[i] == 0.0) ++zeros;
    }
    CHECK(zeros >= 53);  // enough for the earlier noise-search start
  }
}

}  // namespace
}  // namespace bam
