// Copyright 2026 The scorewave Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCOREWAVE_FFT_BACKEND_HPP_
#define SCOREWAVE_FFT_BACKEND_HPP_

#include <complex>
#include <vector>

namespace scorewave::detail {

// Complex DFT of arbitrary length backed by FFTW (plans cached per size,
// planning serialized behind a mutex; execution is thread-safe).
// Conventions: forward uses e^{-2pi i kn/N} with no scaling; inverse uses
// e^{+2pi i kn/N} scaled by 1/N, so inverse(forward(x)) == x.
void fft_forward(std::vector<std::complex<double>>& data);
void fft_inverse(std::vector<std::complex<double>>& data);

}  // namespace scorewave::detail

#endif  // SCOREWAVE_FFT_BACKEND_HPP_
