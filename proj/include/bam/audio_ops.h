// bam/audio_ops.h

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

#ifndef BAM_AUDIO_OPS_H_
#define BAM_AUDIO_OPS_H_

#include <cstdint>
#include <utility>

#include "bam/types.h"

namespace bam {

// How the clean level is measured when realizing an SNR.
enum class LevelBasis { kRms, kActiveRms };

struct MixSpec {
  double snr_db = 0.0;
  std::size_t noise_seek = 0;  // crop offset into the noise recording
  LevelBasis level_basis = LevelBasis::kRms;
};

struct MixResult {
  AudioBuffer mixture;
  AudioBuffer scaled_noise;  // exactly the component added to the clean signal
};

// Root-mean-square of the samples; 0 for an empty buffer.
double rms(const AudioBuffer &buffer);

// Divides by the peak magnitude so the output peak is exactly 1; returns the
// peak as `scale` (original == output * scale). Throws ArgError on silence.
std::pair<AudioBuffer, double> normalize_peak(const AudioBuffer &buffer);

// Scales a crop of `noise` so that 10*log10(rms(clean)^2 / rms(g*noise)^2)
// equals spec.snr_db, then adds it to `clean`. The noise is cropped from
// spec.noise_seek and never looped. Sample rates must match and the noise
// must cover the clean signal's length.
MixResult mix_at_snr(const AudioBuffer &clean, const AudioBuffer &noise,
                     const MixSpec &spec);

// Windowed-sinc polyphase resampler (64 taps per phase, Kaiser beta = 8).
// Equal rates return the input unchanged.
AudioBuffer resample(const AudioBuffer &buffer, int target_rate);

// Speech-shaped noise: seeded Gaussian noise spectrally shaped by the
// reference's Welch-averaged long-term magnitude spectrum (512-point
// segments, 50% overlap) and matched to the reference RMS. The reference
// must hold at least 4096 samples.
AudioBuffer generate_ssn(const AudioBuffer &reference, std::size_t length,
                         std::uint64_t seed);

}  // namespace bam

#endif  // BAM_AUDIO_OPS_H_
