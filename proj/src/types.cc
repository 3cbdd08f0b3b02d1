// src/types.cc

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

#include "bam/types.h"

#include <cmath>

namespace bam {

void validate(const AudioBuffer &buffer, const std::string &context) {
  if (buffer.sample_rate <= 0) {
    throw ArgError(context + ": sample_rate must be positive");
  }
  for (double s : buffer.samples) {
    if (!std::isfinite(s)) {
      throw ArgError(context + ": buffer holds non-finite samples");
    }
  }
}

}  // namespace bam
