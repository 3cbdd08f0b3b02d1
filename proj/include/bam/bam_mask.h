// bam/bam_mask.h

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

#ifndef BAM_BAM_MASK_H_
#define BAM_BAM_MASK_H_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bam/date.h"
#include "bam/types.h"

namespace bam {

// Time-domain blind-mask parameters. The transform keeps a per-frame
// amplitude band untouched, over-subtracts alpha * sigma_hat above it and
// scales by beta below it. alpha/beta/frame length defaults follow the
// method's published operating point.
struct BamParams {
  double alpha = 0.35;       // over-subtraction factor
  double beta = 0.65;        // flooring factor
  double frame_ms = 32.0;    // non-overlapping analysis frames
  bool normalize = true;     // peak-normalize before, restore scale after
  double date_c = kDateC;    // noise-estimator adjustment factor
  DatePolicy date_policy;    // t_min / detection-SNR tuning
};

// Per-frame audit trail of the mask decision.
struct FrameDecision {
  double d_q = 0.0;     // target proportion |s_ny - s_hat| / (s_ny + s_hat)
  double xi_q = 0.0;    // adaptive upper threshold max(y_bq, d_q)
  double sigma_ny = 0.0;  // frame standard deviation the proportion used
  DateEstimate estimate;
  std::size_t kept = 0;
  std::size_t subtracted = 0;
  std::size_t floored = 0;
};

// d_q = |sigma_ny - sigma_hat| / |sigma_ny + sigma_hat|, in [0, 1].
// A silent frame (both zero) is defined as 0. Negative inputs are an error.
double target_proportion(double sigma_ny, double sigma_hat);

// xi_q = max(y_bq, d_q). y_bq must be >= 0 and d_q in [0, 1].
double adaptive_threshold(double y_bq, double d_q);

// Applies the three-branch transform to one frame, comparing magnitudes
// against (y_bq, xi_q) and restoring signs:
//   y_bq < |x| < xi_q  ->  x unchanged            (kept)
//   |x| >= xi_q        ->  sign(x) * max(0, |x| - alpha * sigma_hat)
//                                                 (subtracted)
//   otherwise          ->  beta * x               (floored)
// `d_q` fills the decision's bookkeeping; when negative it is inferred from
// xi_q (callers that already know the proportion should pass it).
std::pair<std::vector<double>, FrameDecision> apply_mask_frame(
    const std::vector<double> &frame, const DateEstimate &est, double xi_q,
    const BamParams &params, double d_q = -1.0);

// Full pipeline: optional peak normalization, 32 ms framing, per-frame
// noise estimate -> proportion -> threshold -> mask, concatenation, scale
// restore. Output length equals input length; one FrameDecision per frame.
// Branch decisions are made on peak-normalized magnitudes (the threshold
// comparison is only meaningful with amplitudes in [0, 1]) while outputs are
// assembled from the original samples, so |output| <= |input| holds exactly
// sample for sample. Throws ArgError for a silent buffer when normalizing.
std::pair<AudioBuffer, std::vector<FrameDecision>> bam_process(
    const AudioBuffer &noisy, const BamParams &params = BamParams());

// One row per frame: frame_index, sigma_ny, sigma_hat, d_q, y_bq, xi_q,
// kept, subtracted, floored.
void write_diagnostics_csv(const std::string &path,
                           const std::vector<FrameDecision> &decisions);

}  // namespace bam

#endif  // BAM_BAM_MASK_H_
