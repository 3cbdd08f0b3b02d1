// bam/corpus.h

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

#ifndef BAM_CORPUS_H_
#define BAM_CORPUS_H_

#include <cstdint>

#include "bam/types.h"

// Bundled synthetic desk corpus. Real speech corpora cannot ship with the
// repository, so the evaluation harness synthesizes its material: harmonic
// vowel-like speech, multi-talker babble (summed synthetic talkers) and
// machinery-like factory noise (impacts plus hum over a pink base). This is
// NOT equivalent to any recorded corpus and is used for directional
// comparisons only. Everything is deterministic given the seed.
namespace bam::corpus {

struct VowelParams {
  double seconds = 2.0;
  int sample_rate = 16000;
  double f0_hz = 125.0;         // fixed pitch
  double gate_fraction = 0.15;  // tail of each pitch period forced to zero
  double peak = 0.9;
  // Optional phrasing: phonation runs of phrase_seconds separated by silent
  // rests of rest_seconds. rest_seconds == 0 keeps phonation continuous.
  double phrase_seconds = 0.0;
  double rest_seconds = 0.0;
};

// Steady vowel sequence with hard glottal gating: each pitch period excites
// two formant resonators, rings, then closes to exact zero for the gated
// tail. The per-period zero clusters give clean frames a literally
// noise-free floor (sigma_hat = 0), which the mask diagnostics tests lean
// on. Formant targets rotate a few vowel qualities over time. With phrasing
// enabled the sequence alternates smooth phonation and silent rests, which
// keeps the material's own non-stationarity low while still exercising how
// masks treat signal-free stretches.
AudioBuffer vowel_sequence(std::uint64_t seed,
                           const VowelParams &params = VowelParams());

// Speech-like utterance: voiced syllables with formant glides and pitch
// declination, occasional fricative bursts, and inter-word pauses.
AudioBuffer utterance(std::uint64_t seed, double seconds = 2.5,
                      int sample_rate = 16000);

// Multi-talker babble surrogate: six independent synthetic talkers (no long
// pauses) at slightly different levels, summed.
AudioBuffer babble(std::uint64_t seed, double seconds,
                   int sample_rate = 16000);

// Machinery noise surrogate: pink base, Poisson impact bursts with random
// resonance and decay, and an amplitude-modulated mains hum.
AudioBuffer factory(std::uint64_t seed, double seconds,
                    int sample_rate = 16000);

}  // namespace bam::corpus

#endif  // BAM_CORPUS_H_
