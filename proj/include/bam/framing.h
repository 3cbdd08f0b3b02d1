// bam/framing.h

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

#ifndef BAM_FRAMING_H_
#define BAM_FRAMING_H_

#include <vector>

#include "bam/types.h"

namespace bam {

enum class TailPolicy {
  kExact,        // source length was a multiple of frame_len
  kPartialKept,  // final shorter frame retained as-is
};

// Non-overlapping segmentation of a signal. All frames have length frame_len
// except possibly the last; concatenation reproduces the source bit-exactly.
struct FrameSequence {
  std::vector<std::vector<double>> frames;
  int frame_len = 0;
  int sample_rate = 0;
  TailPolicy tail_policy = TailPolicy::kExact;
};

// Splits into consecutive non-overlapping frames of round(frame_ms * rate /
// 1000) samples; the final partial frame is kept as-is. An empty buffer gives
// an empty sequence. Throws ArgError when the frame length comes out < 2.
FrameSequence frame_split(const AudioBuffer &buffer, double frame_ms);

// Exact inverse of frame_split.
AudioBuffer concat_frames(const FrameSequence &frames);

}  // namespace bam

#endif  // BAM_FRAMING_H_
