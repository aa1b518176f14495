#include "muhat/fft.hpp"

#include <fftw3.h>

#include <stdexcept>

namespace muhat {

namespace {

std::vector<std::complex<double>> run(const std::vector<std::complex<double>>& in, int sign) {
  if (in.empty()) throw std::invalid_argument("fft: empty input");
  const int n = static_cast<int>(in.size());
  std::vector<std::complex<double>> out(in.size());
  // FFTW_ESTIMATE keeps planning deterministic and leaves the input intact.
  fftw_plan plan = fftw_plan_dft_1d(
      n,
      reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
      reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  if (!plan) throw std::runtime_error("fft: planner failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

}  // namespace

std::vector<std::complex<double>> fft_forward(const std::vector<std::complex<double>>& in) {
  return run(in, FFTW_FORWARD);
}

std::vector<std::complex<double>> fft_inverse(const std::vector<std::complex<double>>& in) {
  return run(in, FFTW_BACKWARD);
}

}  // namespace muhat
