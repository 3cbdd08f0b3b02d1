// src/masks.cc

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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace bam {

namespace {

struct FrameGeometry {
  std::size_t win = 0;
  std::size_t hop = 0;
  std::size_t n_frames = 0;
};

FrameGeometry frame_geometry(std::size_t len, double win_ms, double hop_ms,
                             int sample_rate, const char *context) {
  FrameGeometry g;
  g.win = static_cast<std::size_t>(std::lround(win_ms * sample_rate / 1000.0));
  g.hop = static_cast<std::size_t>(std::lround(hop_ms * sample_rate / 1000.0));
  if (g.hop < 1 || g.win < g.hop) {
    throw ArgError(std::string(context) + ": need win_ms >= hop_ms > 0");
  }
  g.n_frames = len >= g.win ? (len - g.win) / g.hop + 1 : 1;
  return g;
}

// Offset raised cosine, strictly positive across the whole window so the
// cross-fade denominators never vanish inside covered samples.
std::vector<double> analysis_window(std::size_t win) {
  std::vector<double> w(win);
  for (std::size_t i = 0; i < win; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * (i + 0.5) / win);
  }
  return w;
}

void check_same_shape(const TFGrid &a, const TFGrid &b, const char *context) {
  if (a.n_channels() != b.n_channels() || a.n_frames() != b.n_frames() ||
      a.sample_rate != b.sample_rate || a.win_ms != b.win_ms ||
      a.hop_ms != b.hop_ms) {
    throw ArgError(std::string(context) + ": grid shapes differ");
  }
}

BinaryMask mask_like(const TFGrid &grid) {
  BinaryMask mask;
  mask.win_ms = grid.win_ms;
  mask.hop_ms = grid.hop_ms;
  mask.sample_rate = grid.sample_rate;
  mask.bits.assign(grid.n_channels(),
                   std::vector<std::uint8_t>(grid.n_frames(), 0));
  return mask;
}

}  // namespace

TFGrid tf_energy(const ChannelSignals &channels, double win_ms, double hop_ms) {
  if (channels.sample_rate <= 0) {
    throw ArgError("tf_energy: channels carry no sample rate");
  }
  const FrameGeometry g = frame_geometry(channels.length(), win_ms, hop_ms,
                                         channels.sample_rate, "tf_energy");
  const std::vector<double> w = analysis_window(g.win);

  TFGrid grid;
  grid.win_ms = win_ms;
  grid.hop_ms = hop_ms;
  grid.sample_rate = channels.sample_rate;
  grid.energies.assign(channels.n_channels(),
                       std::vector<double>(g.n_frames, 0.0));
  for (std::size_t ch = 0; ch < channels.n_channels(); ++ch) {
    const std::vector<double> &row = channels.rows[ch];
    for (std::size_t f = 0; f < g.n_frames; ++f) {
      const std::size_t start = f * g.hop;
      double e = 0.0;
      const std::size_t n = std::min(g.win, row.size() - std::min(row.size(), start));
      for (std::size_t i = 0; i < n; ++i) {
        const double x = row[start + i];
        e += w[i] * x * x;
      }
      grid.energies[ch][f] = e;
    }
  }
  return grid;
}

BinaryMask ibm_compute_lc(const TFGrid &clean_grid, const TFGrid &noise_grid,
                          double lc_db) {
  check_same_shape(clean_grid, noise_grid, "ibm_compute");
  const double threshold = std::pow(10.0, lc_db / 10.0);
  BinaryMask mask = mask_like(clean_grid);
  for (std::size_t ch = 0; ch < clean_grid.n_channels(); ++ch) {
    for (std::size_t f = 0; f < clean_grid.n_frames(); ++f) {
      // Linear-domain comparison: zero noise keeps positive clean energy,
      // exact ties fall to 0.
      mask.bits[ch][f] =
          clean_grid.energies[ch][f] > noise_grid.energies[ch][f] * threshold
              ? 1
              : 0;
    }
  }
  return mask;
}

BinaryMask ibm_compute(const TFGrid &clean_grid, const TFGrid &noise_grid,
                       double mixture_snr_db, double rc_db) {
  return ibm_compute_lc(clean_grid, noise_grid, mixture_snr_db + rc_db);
}

BinaryMask tbm_compute(const TFGrid &clean_grid, const TFGrid &ssn_grid,
                       double coverage) {
  check_same_shape(clean_grid, ssn_grid, "tbm_compute");
  if (!(coverage > 0.0) || coverage > 1.0) {
    throw ArgError("tbm_compute: coverage must lie in (0, 1]");
  }
  BinaryMask mask = mask_like(clean_grid);
  const std::size_t n_frames = clean_grid.n_frames();

  // Ratio ordering without forming quotients: a/b vs c/d compared as a*d vs
  // c*b (all energies nonnegative, zero-energy units excluded up front).
  const auto ratio_less = [&](const std::vector<double> &ec,
                              const std::vector<double> &en, std::size_t a,
                              std::size_t b) {
    return ec[a] * en[b] < ec[b] * en[a];
  };

  for (std::size_t ch = 0; ch < clean_grid.n_channels(); ++ch) {
    const std::vector<double> &ec = clean_grid.energies[ch];
    const std::vector<double> &en = ssn_grid.energies[ch];
    const double total = std::accumulate(ec.begin(), ec.end(), 0.0);
    if (total <= 0.0) continue;  // all-zero channel stays all-zero

    std::vector<std::size_t> order;
    order.reserve(n_frames);
    for (std::size_t f = 0; f < n_frames; ++f) {
      if (ec[f] > 0.0) order.push_back(f);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (ratio_less(ec, en, b, a)) return true;   // a has larger ratio
      if (ratio_less(ec, en, a, b)) return false;
      return ec[a] > ec[b];  // tie on ratio: bigger contributor first
    });

    // Take whole ratio-tie groups until the coverage is reached, so the
    // retained set is exactly {units with ratio > threshold}.
    double acc = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j < order.size() &&
             !ratio_less(ec, en, order[j], order[i]) &&
             !ratio_less(ec, en, order[i], order[j])) {
        ++j;
      }
      for (std::size_t k = i; k < j; ++k) {
        mask.bits[ch][order[k]] = 1;
        acc += ec[order[k]];
      }
      if (acc >= coverage * total) break;
      i = j;
    }
  }
  return mask;
}

AudioBuffer mask_resynthesize(const ChannelSignals &noisy_channels,
                              const BinaryMask &mask,
                              const GammatoneBank &bank) {
  if (noisy_channels.n_channels() != mask.n_channels() ||
      noisy_channels.n_channels() !=
          static_cast<std::size_t>(bank.n_channels())) {
    throw ArgError("mask_resynthesize: channel count mismatch");
  }
  if (noisy_channels.sample_rate != bank.sample_rate() ||
      mask.sample_rate != bank.sample_rate()) {
    throw ArgError("mask_resynthesize: sample rate mismatch");
  }
  const std::size_t len = noisy_channels.length();
  const FrameGeometry g = frame_geometry(len, mask.win_ms, mask.hop_ms,
                                         bank.sample_rate(),
                                         "mask_resynthesize");
  if (g.n_frames != mask.n_frames()) {
    throw ArgError("mask_resynthesize: mask frame count does not match signal");
  }
  const std::vector<double> w = analysis_window(g.win);

  ChannelSignals weighted;
  weighted.sample_rate = noisy_channels.sample_rate;
  weighted.rows.assign(noisy_channels.n_channels(),
                       std::vector<double>(len, 0.0));
  std::vector<double> num(len), den(len);
  for (std::size_t ch = 0; ch < noisy_channels.n_channels(); ++ch) {
    std::fill(num.begin(), num.end(), 0.0);
    std::fill(den.begin(), den.end(), 0.0);
    for (std::size_t f = 0; f < g.n_frames; ++f) {
      const std::size_t start = f * g.hop;
      const double bit = mask.bits[ch][f];
      for (std::size_t i = 0; i < g.win && start + i < len; ++i) {
        num[start + i] += bit * w[i];
        den[start + i] += w[i];
      }
    }
    const double tail_bit = mask.bits[ch][g.n_frames - 1];
    const std::vector<double> &row = noisy_channels.rows[ch];
    std::vector<double> &out = weighted.rows[ch];
    for (std::size_t i = 0; i < len; ++i) {
      const double weight = den[i] > 0.0 ? num[i] / den[i] : tail_bit;
      out[i] = weight * row[i];
    }
  }
  return resynthesize_channels(weighted, bank);
}

void write_mask(const std::string &path, const BinaryMask &mask) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("write_mask: cannot open '" + path + "'");
  f << "# n_channels=" << mask.n_channels() << " n_frames=" << mask.n_frames()
    << " win_ms=" << mask.win_ms << " hop_ms=" << mask.hop_ms
    << " sample_rate=" << mask.sample_rate << "\n";
  for (const auto &row : mask.bits) {
    for (std::uint8_t b : row) f << (b ? '1' : '0');
    f << "\n";
  }
  if (!f) throw IoError("write_mask: write failure on '" + path + "'");
}

}  // namespace bam
