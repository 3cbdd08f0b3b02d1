// bam/fft.h

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

#ifndef BAM_FFT_H_
#define BAM_FFT_H_

#include <complex>
#include <vector>

namespace bam {

// Real-to-complex FFT of x zero-padded (or truncated) to n_fft points.
// Returns n_fft/2 + 1 bins. Backed by FFTW with cached FFTW_ESTIMATE plans;
// FFTW_MEASURE would pick algorithms by timing and break bit-exact
// reproducibility, so it is deliberately not used.
std::vector<std::complex<double>> rfft(const std::vector<double> &x,
                                       int n_fft);

// Inverse of rfft: expects n_fft/2 + 1 bins, returns n_fft real samples,
// normalized so that irfft(rfft(x, n), n) == x up to rounding.
std::vector<double> irfft(const std::vector<std::complex<double>> &spec,
                          int n_fft);

// Smallest size >= n whose factors are all in {2, 3, 5, 7}; keeps odd-length
// analysis windows off FFTW's slow generic code path.
int next_fast_fft_size(int n);

}  // namespace bam

#endif  // BAM_FFT_H_
