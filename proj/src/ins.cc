// src/ins.cc

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

#include "bam/ins.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>

#include "bam/fft.h"
#include "bam/rng.h"
#include "json.hpp"

namespace bam {

namespace {

constexpr int kTapers = 5;          // Hermite tapers per local spectrum
constexpr double kTaperSpan = 6.0;  // tapers sampled on [-span, span]
constexpr double kConfidence = 0.95;

// First kTapers unit-norm Hermite functions H_k(t) e^{-t^2/2} on a
// symmetric grid of n points.
std::vector<std::vector<double>> hermite_tapers(std::size_t n) {
  std::vector<std::vector<double>> h(kTapers, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = -kTaperSpan + 2.0 * kTaperSpan * i / (n - 1);
    const double base = std::exp(-0.5 * t * t);
    double hk_minus = 0.0, hk = 1.0;  // physicists' recursion
    for (int k = 0; k < kTapers; ++k) {
      h[k][i] = hk * base;
      const double next = 2.0 * t * hk - 2.0 * k * hk_minus;
      hk_minus = hk;
      hk = next;
    }
  }
  for (auto &taper : h) {
    double norm = 0.0;
    for (double v : taper) norm += v * v;
    norm = std::sqrt(norm);
    for (double &v : taper) v /= norm;
  }
  return h;
}

// Spectral-evolution statistic: variance over time of the distance between
// each local multitaper spectrum and the time-averaged spectrum. The
// distance adds the symmetrized Kullback-Leibler divergence of the
// energy-normalized spectra and the |log energy ratio|, so either a shape
// change or a level change registers. A purely multiplicative combination
// would be blind to amplitude modulation of a fixed spectrum (KL of the
// normalized spectra vanishes there and zeroes the product).
double theta_statistic(const std::vector<double> &x, std::size_t win) {
  const std::size_t hop = win / 2;
  const std::size_t n_cols = (x.size() - win) / hop + 1;
  const std::size_t n_fft = next_fast_fft_size(win);
  const std::size_t n_bins = n_fft / 2 + 1;
  const std::vector<std::vector<double>> tapers = hermite_tapers(win);

  std::vector<std::vector<double>> spectra(n_cols,
                                           std::vector<double>(n_bins, 0.0));
  std::vector<double> seg(win);
  for (std::size_t c = 0; c < n_cols; ++c) {
    for (int k = 0; k < kTapers; ++k) {
      for (std::size_t i = 0; i < win; ++i) {
        seg[i] = tapers[k][i] * x[c * hop + i];
      }
      const auto spec = rfft(seg, n_fft);
      for (std::size_t b = 0; b < n_bins; ++b) {
        spectra[c][b] += std::norm(spec[b]) / kTapers;
      }
    }
  }

  // Tiny uniform floor so exactly-silent stretches (all-zero segments) and
  // empty bins keep the divergences finite; scales with the signal power,
  // which preserves scale invariance.
  double grand_mean = 0.0;
  for (const auto &col : spectra) {
    for (double v : col) grand_mean += v;
  }
  grand_mean /= static_cast<double>(n_cols * n_bins);
  const double floor_eps = 1e-12 * grand_mean + 1e-300;
  std::vector<double> mean_spec(n_bins, 0.0);
  for (auto &col : spectra) {
    for (std::size_t b = 0; b < n_bins; ++b) {
      col[b] += floor_eps;
      mean_spec[b] += col[b] / n_cols;
    }
  }

  const auto distance = [&](const std::vector<double> &p_raw,
                            const std::vector<double> &q_raw) {
    double ep = 0.0, eq = 0.0;
    for (std::size_t b = 0; b < n_bins; ++b) {
      ep += p_raw[b];
      eq += q_raw[b];
    }
    double kl = 0.0;
    for (std::size_t b = 0; b < n_bins; ++b) {
      const double p = p_raw[b] / ep;
      const double q = q_raw[b] / eq;
      kl += (p - q) * std::log(p / q);
    }
    return kl + std::fabs(std::log(ep / eq));
  };

  double mean_d = 0.0, mean_d2 = 0.0;
  for (const auto &col : spectra) {
    const double d = distance(col, mean_spec);
    mean_d += d;
    mean_d2 += d * d;
  }
  mean_d /= n_cols;
  mean_d2 /= n_cols;
  const double var =
      (mean_d2 - mean_d * mean_d) * n_cols / std::max<double>(n_cols - 1, 1);
  return std::max(var, 0.0);
}

}  // namespace

AudioBuffer surrogate(const AudioBuffer &buffer, std::uint64_t seed) {
  validate(buffer, "surrogate");
  const std::size_t n = buffer.samples.size();
  if (n < 64) throw ArgError("surrogate: need at least 64 samples");

  std::vector<std::complex<double>> spec = rfft(buffer.samples, n);
  Rng rng(seed);
  // Keep DC (and Nyquist for even n) untouched; they must stay real.
  const std::size_t last = n % 2 == 0 ? spec.size() - 1 : spec.size();
  for (std::size_t k = 1; k < last; ++k) {
    spec[k] = std::polar(std::abs(spec[k]), 2.0 * M_PI * rng.uniform());
  }
  AudioBuffer out;
  out.sample_rate = buffer.sample_rate;
  out.samples = irfft(spec, n);
  return out;
}

std::vector<double> ins_default_scales() {
  return {0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5};
}

InsProfile ins_compute(const AudioBuffer &buffer,
                       const std::vector<double> &scales, int n_surrogates,
                       std::uint64_t seed) {
  validate(buffer, "ins_compute");
  if (scales.empty()) throw ArgError("ins_compute: no scales given");
  if (n_surrogates < 20) {
    throw ArgError("ins_compute: need at least 20 surrogates");
  }
  const std::size_t n = buffer.samples.size();
  for (double s : scales) {
    if (!(s > 0.0) || !(s < 1.0)) {
      throw ArgError("ins_compute: scales must lie in (0, 1)");
    }
    const std::size_t win = static_cast<std::size_t>(std::lround(s * n));
    if (win < 2 * kTapers + 1) {
      throw ArgError("ins_compute: scale too small for the buffer");
    }
    if (n < win + win / 2) {
      throw ArgError("ins_compute: scale leaves fewer than two windows");
    }
  }

  // Surrogates are scale-independent; draw them once.
  std::vector<std::vector<double>> nulls(n_surrogates);
  for (int j = 0; j < n_surrogates; ++j) {
    nulls[j] = surrogate(buffer, Rng::derive(seed, 0x5172 + j)).samples;
  }

  InsProfile profile;
  profile.scales = scales;
  profile.n_surrogates = n_surrogates;
  profile.seed = seed;
  for (double s : scales) {
    const std::size_t win = static_cast<std::size_t>(std::lround(s * n));
    const double theta = theta_statistic(buffer.samples, win);

    double m = 0.0, m2 = 0.0;
    for (const auto &null_x : nulls) {
      const double t0 = theta_statistic(null_x, win);
      m += t0;
      m2 += t0 * t0;
    }
    m /= n_surrogates;
    m2 /= n_surrogates;
    const double var =
        std::max(m2 - m * m, 0.0) * n_surrogates / (n_surrogates - 1.0);

    // Gamma fit by moments on the surrogate statistics; the threshold is
    // the fitted 95th percentile mapped through the same sqrt as INS.
    double gamma_at_conf;
    if (var > 0.0 && m > 0.0) {
      const double shape = m * m / var;
      const double scale = var / m;
      gamma_at_conf = gamma_quantile(shape, scale, kConfidence);
    } else {
      gamma_at_conf = m;  // degenerate null: all surrogate statistics equal
    }
    const double ins = m > 0.0 ? std::sqrt(theta / m) : 0.0;
    const double gamma = m > 0.0 ? std::sqrt(gamma_at_conf / m) : 0.0;
    profile.ins.push_back(ins);
    profile.gamma.push_back(gamma);
    profile.nonstationary.push_back(ins > gamma ? 1 : 0);
  }
  profile.ins_max = *std::max_element(profile.ins.begin(), profile.ins.end());
  return profile;
}

InsProfile ins_compute(const AudioBuffer &buffer, std::uint64_t seed) {
  return ins_compute(buffer, ins_default_scales(), 50, seed);
}

double ins_max(const InsProfile &profile) {
  if (profile.ins.empty()) throw ArgError("ins_max: empty profile");
  return *std::max_element(profile.ins.begin(), profile.ins.end());
}

void write_ins_csv(const std::string &path, const InsProfile &profile) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("write_ins_csv: cannot open '" + path + "'");
  f << "scale,ins,gamma,verdict\n";
  char line[128];
  for (std::size_t i = 0; i < profile.scales.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%s\n",
                  profile.scales[i], profile.ins[i], profile.gamma[i],
                  profile.nonstationary[i] ? "nonstationary" : "stationary");
    f << line;
  }
  if (!f) throw IoError("write_ins_csv: write failure on '" + path + "'");
}

std::string ins_to_json(const InsProfile &profile) {
  nlohmann::json j;
  j["metric"] = "ins";
  j["value"] = profile.ins_max;
  j["params"]["scales"] = profile.scales;
  j["params"]["n_surrogates"] = profile.n_surrogates;
  j["params"]["ins"] = profile.ins;
  j["params"]["gamma"] = profile.gamma;
  j["seed"] = profile.seed;
  return j.dump();
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw ArgError("regularized_gamma_p: shape must be > 0");
  if (x <= 0.0) return 0.0;
  const double log_gamma_a = std::lgamma(a);
  if (x < a + 1.0) {
    // Series expansion around 0.
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - log_gamma_a);
  }
  // Continued fraction for the upper tail (Lentz's method).
  double b = x + 1.0 - a;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  const double q = std::exp(-x + a * std::log(x) - log_gamma_a) * h;
  return 1.0 - q;
}

double gamma_quantile(double shape, double scale, double p) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw ArgError("gamma_quantile: shape and scale must be > 0");
  }
  if (!(p > 0.0) || !(p < 1.0)) {
    throw ArgError("gamma_quantile: p must lie in (0, 1)");
  }
  // Bracket then bisect on the standardized variable.
  double hi = std::max(shape * 2.0, 8.0);
  while (regularized_gamma_p(shape, hi) < p) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (regularized_gamma_p(shape, mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return scale * 0.5 * (lo + hi);
}

}  // namespace bam
