// src/framing.cc

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

#include "bam/framing.h"

#include <cmath>

namespace bam {

FrameSequence frame_split(const AudioBuffer &buffer, double frame_ms) {
  if (frame_ms <= 0.0) throw ArgError("frame_split: frame_ms must be > 0");
  const long frame_len =
      std::lround(frame_ms * buffer.sample_rate / 1000.0);
  if (frame_len < 2) {
    throw ArgError("frame_split: frame length below 2 samples");
  }

  FrameSequence seq;
  seq.frame_len = static_cast<int>(frame_len);
  seq.sample_rate = buffer.sample_rate;

  const std::size_t n = buffer.size();
  const std::size_t step = static_cast<std::size_t>(frame_len);
  for (std::size_t start = 0; start < n; start += step) {
    const std::size_t len = std::min(step, n - start);
    seq.frames.emplace_back(buffer.samples.begin() + start,
                            buffer.samples.begin() + start + len);
  }
  seq.tail_policy = (n % step == 0) ? TailPolicy::kExact
                                    : TailPolicy::kPartialKept;
  return seq;
}

AudioBuffer concat_frames(const FrameSequence &frames) {
  AudioBuffer out;
  out.sample_rate = frames.sample_rate;
  std::size_t total = 0;
  for (const auto &f : frames.frames) total += f.size();
  out.samples.reserve(total);
  for (const auto &f : frames.frames) {
    out.samples.insert(out.samples.end(), f.begin(), f.end());
  }
  return out;
}

}  // namespace bam
