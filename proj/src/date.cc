// src/date.cc

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

#include "bam/date.h"

#include <algorithm>
#include <cmath>

#include "bam/types.h"

namespace bam {

double xi_factor(double rho) {
  if (rho <= 0.0) return 1.0;
  const double half_sq = 0.5 * rho * rho;
  // acosh(e^x) = x + log(1 + sqrt(1 - e^-2x)) -> x + log 2; switch before
  // exp() overflows.
  if (half_sq > 300.0) return (half_sq + M_LN2) / rho;
  return std::acosh(std::exp(half_sq)) / rho;
}

DateEstimate date_estimate(const std::vector<double> &frame, double c,
                           const DatePolicy &policy) {
  const std::size_t T = frame.size();
  if (T < 2) throw ArgError("date_estimate: frame must hold at least 2 samples");
  if (c <= 0.0) throw ArgError("date_estimate: c must be positive");
  if (policy.t_min_fraction < 0.0 || policy.t_min_fraction >= 1.0) {
    throw ArgError("date_estimate: t_min_fraction must lie in [0, 1)");
  }

  std::vector<double> y(T);
  for (std::size_t i = 0; i < T; ++i) y[i] = std::fabs(frame[i]);
  std::sort(y.begin(), y.end());

  // prefix[t] = Y_1 + ... + Y_t (1-based t). Left-to-right accumulation is
  // part of the contract: sigma_hat must be exactly recomputable as
  // c * prefix[b_q] / b_q.
  std::vector<double> prefix(T + 1, 0.0);
  for (std::size_t t = 1; t <= T; ++t) prefix[t] = prefix[t - 1] + y[t - 1];

  DateEstimate est;
  est.c = c;
  est.t_min = static_cast<std::size_t>(
      std::floor(policy.t_min_fraction * static_cast<double>(T)));

  const double h = xi_factor(policy.detection_snr);
  const std::size_t first = std::max<std::size_t>(est.t_min + 1, 2);
  std::size_t b_q = 0;
  // Y_{t-1} <= xi(rho) * (c/t) * sum_{i<=t} Y_i <= Y_{t+1}; the upper
  // neighbor caps the search at t = T - 1.
  for (std::size_t t = first; t < T; ++t) {
    const double mid = h * c * prefix[t] / static_cast<double>(t);
    if (y[t - 2] <= mid && mid <= y[t]) {
      b_q = t;
      est.converged = true;
      break;
    }
  }
  if (b_q == 0) {
    b_q = T;  // all-noise fallback
    est.converged = false;
  }

  est.b_q = b_q;
  est.y_bq = y[b_q - 1];
  est.sigma_hat = c * prefix[b_q] / static_cast<double>(b_q);
  return est;
}

double frame_std(const std::vector<double> &frame) {
  if (frame.empty()) throw ArgError("frame_std: empty frame");
  double mean = 0.0;
  for (double s : frame) mean += s;
  mean /= static_cast<double>(frame.size());
  double acc = 0.0;
  for (double s : frame) {
    const double d = s - mean;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(frame.size()));
}

}  // namespace bam
