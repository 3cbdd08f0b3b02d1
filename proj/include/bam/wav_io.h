// bam/wav_io.h

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

#ifndef BAM_WAV_IO_H_
#define BAM_WAV_IO_H_

#include <string>

#include "bam/types.h"

namespace bam {

enum class WavFormat { kPcm16, kFloat32 };

// Reads a RIFF/WAVE file. PCM 16-bit and IEEE float 32-bit only; anything
// else is a FormatError, unreadable paths are an IoError. Multichannel data
// is averaged down to mono; integer samples are scaled by 1/32768.
AudioBuffer read_wav(const std::string &path);

// Writes `buffer` in the requested sample format. For kPcm16, samples are
// rounded to the nearest code and saturated at the int16 range; the number
// of clipped samples is reported through *clip_count when non-null. For
// kFloat32 each sample is stored as the nearest float, so a round trip is
// exact whenever the values are float-representable.
void write_wav(const std::string &path, const AudioBuffer &buffer,
               WavFormat format, long *clip_count = nullptr);

}  // namespace bam

#endif  // BAM_WAV_IO_H_
