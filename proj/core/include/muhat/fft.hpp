#pragma once

#include <complex>
#include <vector>

namespace muhat {

// Thin deterministic wrappers over FFTW (single-threaded, FFTW_ESTIMATE).
// forward:  X[k] = sum_j x[j] e^{-2 pi i j k / n}   (unnormalized)
// inverse:  x[j] = sum_k X[k] e^{+2 pi i j k / n}   (unnormalized)
std::vector<std::complex<double>> fft_forward(const std::vector<std::complex<double>>& in);
std::vector<std::complex<double>> fft_inverse(const std::vector<std::complex<double>>& in);

}  // namespace muhat
