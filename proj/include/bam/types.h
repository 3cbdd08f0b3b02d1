// bam/types.h

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

#ifndef BAM_TYPES_H_
#define BAM_TYPES_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bam {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File-system / OS level failures (missing file, unwritable path).
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed or unsupported data (bad RIFF chunks, unsupported codecs).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Precondition violations (rate mismatches, silent input where forbidden...).
class ArgError : public Error {
 public:
  using Error::Error;
};

// Mono sampled signal. Samples are dimensionless amplitudes, nominally in
// [-1, 1]; sample_rate in Hz. The universal currency of the pipeline.
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 0;

  AudioBuffer() = default;
  AudioBuffer(std::vector<double> s, int rate)
      : samples(std::move(s)), sample_rate(rate) {}

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

// Throws ArgError if the buffer holds NaN/Inf or a non-positive rate.
void validate(const AudioBuffer &buffer, const std::string &context);

}  // namespace bam

#endif  // BAM_TYPES_H_
