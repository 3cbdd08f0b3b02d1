// src/bam_mask.cc

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

#include "bam/bam_mask.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "bam/audio_ops.h"
#include "bam/framing.h"

namespace bam {

namespace {

void check_params(const BamParams &params) {
  if (params.alpha < 0.0) throw ArgError("bam: alpha must be >= 0");
  if (params.beta < 0.0 || params.beta > 1.0) {
    throw ArgError("bam: beta must lie in [0, 1]");
  }
  if (params.frame_ms <= 0.0) throw ArgError("bam: frame_ms must be > 0");
}

// Branch decisions on (possibly normalized) magnitudes `m`, arithmetic on
// the original samples `x`; `scale` converts the estimate back to x's units.
// With scale == 1 and m == |x| this is the plain single-frame transform.
std::vector<double> apply_branches(const std::vector<double> &x,
                                   const std::vector<double> &m,
                                   const DateEstimate &est, double xi_q,
                                   const BamParams &params, double scale,
                                   FrameDecision *decision) {
  const double sub = params.alpha * est.sigma_hat * scale;
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (est.y_bq < m[i] && m[i] < xi_q) {
      out[i] = x[i];
      ++decision->kept;
    } else if (m[i] >= xi_q) {
      const double mag = std::fabs(x[i]) - sub;
      out[i] = mag <= 0.0 ? 0.0 : std::copysign(mag, x[i]);
      ++decision->subtracted;
    } else {
      out[i] = params.beta * x[i];
      ++decision->floored;
    }
  }
  return out;
}

}  // namespace

double target_proportion(double sigma_ny, double sigma_hat) {
  if (sigma_ny < 0.0 || sigma_hat < 0.0) {
    throw ArgError("target_proportion: deviations must be >= 0");
  }
  const double denom = sigma_ny + sigma_hat;
  if (denom == 0.0) return 0.0;  // silent frame
  return std::fabs(sigma_ny - sigma_hat) / denom;
}

double adaptive_threshold(double y_bq, double d_q) {
  if (y_bq < 0.0) throw ArgError("adaptive_threshold: y_bq must be >= 0");
  if (d_q < 0.0 || d_q > 1.0) {
    throw ArgError("adaptive_threshold: d_q must lie in [0, 1]");
  }
  return std::max(y_bq, d_q);
}

std::pair<std::vector<double>, FrameDecision> apply_mask_frame(
    const std::vector<double> &frame, const DateEstimate &est, double xi_q,
    const BamParams &params, double d_q) {
  check_params(params);
  FrameDecision decision;
  decision.estimate = est;
  decision.xi_q = xi_q;
  // Without the caller's proportion, reconstruct the value consistent with
  // xi_q = max(y_bq, d_q): any xi_q above y_bq can only have come from d_q.
  decision.d_q = d_q >= 0.0 ? d_q : (xi_q > est.y_bq ? xi_q : 0.0);

  std::vector<double> m(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) m[i] = std::fabs(frame[i]);
  auto out = apply_branches(frame, m, est, xi_q, params, 1.0, &decision);
  return {std::move(out), decision};
}

std::pair<AudioBuffer, std::vector<FrameDecision>> bam_process(
    const AudioBuffer &noisy, const BamParams &params) {
  check_params(params);
  validate(noisy, "bam_process");

  double scale = 1.0;
  if (params.normalize) {
    double peak = 0.0;
    for (double s : noisy.samples) peak = std::max(peak, std::fabs(s));
    if (peak == 0.0) {
      throw ArgError("bam_process: silent buffer cannot be normalized");
    }
    scale = peak;
  }

  FrameSequence frames = frame_split(noisy, params.frame_ms);
  AudioBuffer out;
  out.sample_rate = noisy.sample_rate;
  out.samples.reserve(noisy.size());
  std::vector<FrameDecision> decisions;
  decisions.reserve(frames.frames.size());

  std::vector<double> norm;
  std::vector<double> mags;
  for (const auto &frame : frames.frames) {
    norm.resize(frame.size());
    mags.resize(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i) {
      norm[i] = frame[i] / scale;
      mags[i] = std::fabs(norm[i]);
    }

    const DateEstimate est =
        date_estimate(norm, params.date_c, params.date_policy);
    const double sigma_ny = frame_std(norm);
    const double d_q = target_proportion(sigma_ny, est.sigma_hat);
    const double xi_q = adaptive_threshold(est.y_bq, d_q);

    FrameDecision decision;
    decision.estimate = est;
    decision.sigma_ny = sigma_ny;
    decision.d_q = d_q;
    decision.xi_q = xi_q;
    auto processed =
        apply_branches(frame, mags, est, xi_q, params, scale, &decision);
    out.samples.insert(out.samples.end(), processed.begin(), processed.end());
    decisions.push_back(decision);
  }
  return {std::move(out), std::move(decisions)};
}

void write_diagnostics_csv(const std::string &path,
                           const std::vector<FrameDecision> &decisions) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("write_diagnostics_csv: cannot open '" + path + "'");
  f << "frame_index,sigma_ny,sigma_hat,d_q,y_bq,xi_q,kept,subtracted,floored\n";
  char line[256];
  for (std::size_t q = 0; q < decisions.size(); ++q) {
    const FrameDecision &d = decisions[q];
    std::snprintf(line, sizeof(line),
                  "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%zu,%zu,%zu\n", q,
                  d.sigma_ny, d.estimate.sigma_hat, d.d_q, d.estimate.y_bq,
                  d.xi_q, d.kept, d.subtracted, d.floored);
    f << line;
  }
  if (!f) throw IoError("write_diagnostics_csv: write failure on '" + path + "'");
}

}  // namespace bam
