// src/fft.cc

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

#include "bam/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>

#include "bam/types.h"

namespace bam {

namespace {

// One cached plan pair per transform size. FFTW plan creation is not
// reentrant, and execution scribbles over the plan's buffers, so everything
// runs under a single lock; the toolkit is deliberately single-threaded in
// its FFT use.
struct PlanEntry {
  int n = 0;
  double *real = nullptr;              // n doubles
  fftw_complex *cplx = nullptr;        // n/2+1 bins
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit PlanEntry(int size) : n(size) {
    real = fftw_alloc_real(static_cast<size_t>(n));
    cplx = fftw_alloc_complex(static_cast<size_t>(n / 2 + 1));
    forward = fftw_plan_dft_r2c_1d(n, real, cplx, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(n, cplx, real, FFTW_ESTIMATE);
  }
  ~PlanEntry() {
    if (forward != nullptr) fftw_destroy_plan(forward);
    if (backward != nullptr) fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(cplx);
  }
  PlanEntry(const PlanEntry &) = delete;
  PlanEntry &operator=(const PlanEntry &) = delete;
};

std::mutex g_fft_mutex;

PlanEntry &plan_for(int n) {
  static std::map<int, PlanEntry *> *cache = new std::map<int, PlanEntry *>();
  auto it = cache->find(n);
  if (it == cache->end()) {
    it = cache->emplace(n, new PlanEntry(n)).first;
  }
  return *it->second;
}

}  // namespace

std::vector<std::complex<double>> rfft(const std::vector<double> &x,
                                       int n_fft) {
  if (n_fft < 2) throw ArgError("rfft: n_fft must be >= 2");
  std::lock_guard<std::mutex> lock(g_fft_mutex);
  PlanEntry &p = plan_for(n_fft);
  const std::size_t m = std::min<std::size_t>(x.size(), n_fft);
  std::memcpy(p.real, x.data(), m * sizeof(double));
  if (m < static_cast<std::size_t>(n_fft)) {
    std::memset(p.real + m, 0, (n_fft - m) * sizeof(double));
  }
  fftw_execute(p.forward);
  std::vector<std::complex<double>> out(n_fft / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = {p.cplx[k][0], p.cplx[k][1]};
  }
  return out;
}

std::vector<double> irfft(const std::vector<std::complex<double>> &spec,
                          int n_fft) {
  if (n_fft < 2) throw ArgError("irfft: n_fft must be >= 2");
  if (spec.size() != static_cast<std::size_t>(n_fft / 2 + 1)) {
    throw ArgError("irfft: spectrum size does not match n_fft");
  }
  std::lock_guard<std::mutex> lock(g_fft_mutex);
  PlanEntry &p = plan_for(n_fft);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    p.cplx[k][0] = spec[k].real();
    p.cplx[k][1] = spec[k].imag();
  }
  fftw_execute(p.backward);
  std::vector<double> out(static_cast<std::size_t>(n_fft));
  const double inv = 1.0 / n_fft;
  for (int i = 0; i < n_fft; ++i) out[static_cast<std::size_t>(i)] = p.real[i] * inv;
  return out;
}

int next_fast_fft_size(int n) {
  if (n < 2) return 2;
  for (int m = n;; ++m) {
    int r = m;
    for (int f : {2, 3, 5, 7}) {
      while (r % f == 0) r /= f;
    }
    if (r == 1) return m;
  }
}

}  // namespace bam
