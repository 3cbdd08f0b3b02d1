// bam/stoi.h

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

#ifndef BAM_STOI_H_
#define BAM_STOI_H_

#include <optional>
#include <string>

#include "bam/types.h"

namespace bam {

// Short-time objective intelligibility. The procedure and all constants are
// fixed (10 kHz working rate, 256-sample half-overlapped frames with a
// 512-point FFT, 15 one-third-octave bands from 150 Hz, 384 ms segments,
// -15 dB clipping, 40 dB silent-frame range) so scores stay comparable
// across runs.
struct StoiScore {
  double value = 0.0;
  // Present when the score has been normalized against a reference
  // condition; capped at 1.
  std::optional<double> normalized_value;
};

// Correlation-based intelligibility of `processed` against the clean
// reference. Both buffers are resampled to 10 kHz; they must describe the
// same utterance (length mismatch beyond one sample is an error) and carry
// at least 0.5 s of audio. Throws ArgError when silent-frame removal leaves
// too little material to form one 384 ms segment.
StoiScore stoi(const AudioBuffer &clean, const AudioBuffer &processed);

// normalized_value = min(1, score / reference). Throws ArgError for a
// non-positive reference value.
StoiScore normalize_score(const StoiScore &score, const StoiScore &reference);

// Convenience: stoi() followed by normalize_score().
StoiScore stoi_normalized(const AudioBuffer &clean,
                          const AudioBuffer &processed,
                          const StoiScore &reference);

// {"metric": "stoi", "value": ..., "normalized_value": ...?}.
std::string stoi_to_json(const StoiScore &score);

}  // namespace bam

#endif  // BAM_STOI_H_
