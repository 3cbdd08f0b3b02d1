// bam/masks.h

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

#ifndef BAM_MASKS_H_
#define BAM_MASKS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "bam/gammatone.h"
#include "bam/types.h"

namespace bam {

// Default local-criterion offset from the mixture SNR for the ideal binary
// mask, and default per-channel speech-energy coverage for the target
// binary mask.
constexpr double kIbmRcDb = -5.0;
constexpr double kTbmCoverage = 0.99;

// Per-(channel, frame) windowed energies over a channel decomposition.
struct TFGrid {
  std::vector<std::vector<double>> energies;  // [n_channels][n_frames]
  double win_ms = 20.0;
  double hop_ms = 10.0;
  int sample_rate = 0;

  std::size_t n_channels() const { return energies.size(); }
  std::size_t n_frames() const {
    return energies.empty() ? 0 : energies[0].size();
  }
};

// Binary keep/discard decisions over the same geometry as a TFGrid.
struct BinaryMask {
  std::vector<std::vector<std::uint8_t>> bits;  // [n_channels][n_frames]
  double win_ms = 20.0;
  double hop_ms = 10.0;
  int sample_rate = 0;

  std::size_t n_channels() const { return bits.size(); }
  std::size_t n_frames() const { return bits.empty() ? 0 : bits[0].size(); }
};

// Windowed channel energies: for every channel, energy per frame is the
// raised-cosine-weighted sum of squared samples over win_ms, advancing by
// hop_ms. Frame count is floor((len - win) / hop) + 1; a signal shorter
// than one window yields a single zero-padded frame. Requires
// win_ms >= hop_ms > 0.
TFGrid tf_energy(const ChannelSignals &channels, double win_ms = 20.0,
                 double hop_ms = 10.0);

// Ideal binary mask against an absolute local criterion: bit = 1 iff
// 10*log10(E_clean / E_noise) > lc_db, evaluated in the linear domain so
// E_noise = 0 keeps any positive E_clean and an exact tie yields 0.
BinaryMask ibm_compute_lc(const TFGrid &clean_grid, const TFGrid &noise_grid,
                          double lc_db);

// Conventional relative-criterion form: LC = mixture_snr_db + rc_db.
BinaryMask ibm_compute(const TFGrid &clean_grid, const TFGrid &noise_grid,
                       double mixture_snr_db, double rc_db = kIbmRcDb);

// Target binary mask: per channel, keep the units with the highest clean /
// speech-shaped-noise energy ratios until they hold at least `coverage` of
// the channel's clean energy. The retained set is a strict superlevel set
// of the ratio (whole tie groups enter together), i.e. bit = 1 where the
// unit ratio exceeds the largest per-channel threshold that still reaches
// the coverage. All-zero channels stay all-zero.
BinaryMask tbm_compute(const TFGrid &clean_grid, const TFGrid &ssn_grid,
                       double coverage = kTbmCoverage);

// Applies a binary mask to the channel signals (raised-cosine cross-fade
// between frame decisions at hop boundaries) and resynthesizes through the
// bank's delay-aligned sum. Samples past the last frame's window reuse the
// last frame's bit.
AudioBuffer mask_resynthesize(const ChannelSignals &noisy_channels,
                              const BinaryMask &mask,
                              const GammatoneBank &bank);

// Diff-friendly dump: a geometry header line, then one '0'/'1' row per
// channel.
void write_mask(const std::string &path, const BinaryMask &mask);

}  // namespace bam

#endif  // BAM_MASKS_H_
