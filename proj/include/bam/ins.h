// bam/ins.h

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

#ifndef BAM_INS_H_
#define BAM_INS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "bam/types.h"

namespace bam {

// Index of Non-Stationarity via surrogates: the signal's spectral-evolution
// statistic is compared with the null distribution obtained from
// phase-randomized (hence stationary) copies. Per analysis scale Th/T the
// statistic Theta is the variance over time of a spectral distance between
// local multitaper spectra and the time-averaged spectrum; a Gamma fit to
// the surrogate statistics gives the 95%-confidence threshold gamma. The
// signal counts as non-stationary at a scale when INS > gamma.
struct InsProfile {
  std::vector<double> scales;               // Th/T ratios, as analyzed
  std::vector<double> ins;                  // sqrt(Theta / mean Theta0)
  std::vector<double> gamma;                // decision threshold per scale
  std::vector<std::uint8_t> nonstationary;  // ins > gamma per scale
  double ins_max = 0.0;                     // max of ins
  int n_surrogates = 0;
  std::uint64_t seed = 0;
};

// Phase-randomized copy: discrete spectrum magnitudes preserved exactly
// (DC and Nyquist bins untouched), phases i.i.d. uniform, Hermitian
// symmetry enforced. Requires length >= 64.
AudioBuffer surrogate(const AudioBuffer &buffer, std::uint64_t seed);

// Th/T grid spanning short to long analysis windows.
std::vector<double> ins_default_scales();

// Full test at every scale. Surrogates are drawn once (seed-derived
// streams) and reused across scales. Preconditions: each scale in (0, 1),
// n_surrogates >= 20, and the buffer long enough that every scale yields at
// least two analysis windows.
InsProfile ins_compute(const AudioBuffer &buffer,
                       const std::vector<double> &scales, int n_surrogates,
                       std::uint64_t seed);
InsProfile ins_compute(const AudioBuffer &buffer, std::uint64_t seed);

// Maximum INS over the profile's scales; throws ArgError on an empty
// profile.
double ins_max(const InsProfile &profile);

// CSV rows: scale, ins, gamma, verdict.
void write_ins_csv(const std::string &path, const InsProfile &profile);

// {"metric": "ins", "value": ins_max, "params": {...}, "seed": ...}.
std::string ins_to_json(const InsProfile &profile);

// Regularized lower incomplete gamma P(a, x) and the Gamma(shape, scale)
// quantile derived from it. Exposed for oracle checks; the quantile is
// found by bisection and is deterministic.
double regularized_gamma_p(double a, double x);
double gamma_quantile(double shape, double scale, double p);

}  // namespace bam

#endif  // BAM_INS_H_
