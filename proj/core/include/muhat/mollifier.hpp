#pragma once

// Ingham-type bump phi supported on [-1/2, 0]: the finite convolution of
// j_max normalized indicators of [-a_j, 0]. Its transform is the exactly
// computable product  phi_hat(s) = exp(i pi s / 2) * prod_j sinc(pi a_j s),
// E(u) convention f_hat(s) = int f(x) e^{-2 pi i s x} dx.

#include <complex>
#include <vector>

#include "muhat/report.hpp"

namespace muhat {

struct InghamMollifier {
  double beta = 0.0;        // target decay exponent in (0,1)
  double beta_prime = 0.0;  // length-sequence exponent, in (beta, 1)
  double tol = 0.0;         // relative budget for early product truncation
  int j_max = 0;
  std::vector<double> lengths;    // a_j = c0 * j^{-1/beta'}, sum = 1/2 exactly
  std::vector<double> suffix_sq;  // suffix_sq[J] = sum_{j > J} a_j^2
};

// Lengths a_j = c0 j^{-1/beta'} rescaled so sum a_j = 1/2; beta' defaults to
// (1+beta)/2. Throws if beta is outside (0,1) or j_max < 8 (too few factors
// to meet any early-truncation budget at moderate frequencies).
InghamMollifier build_mollifier(double beta, int j_max, double tol,
                                double beta_prime = 0.0);

// Product truncated at the smallest J with (pi s)^2 * suffix_sq[J] / 6 < tol.
std::complex<double> phi_hat(const InghamMollifier& m, double s);
// All j_max factors, no early stop. Reference path for truncation honesty.
std::complex<double> phi_hat_full(const InghamMollifier& m, double s);
// log |phi_hat(s)| over all factors; -inf at sinc zeros.
double log_abs_phi_hat(const InghamMollifier& m, double s);
// Relative error bound carried by phi_hat(s) (0 when no factor was dropped).
double phi_hat_tail_bound(const InghamMollifier& m, double s);

// Rigorous decreasing majorants of |phi_hat|: the product of min(1,
// 1/(pi a_j v)) over the first four factors (cheap, used in tail integrals)
// and over all factors (sharp enough to window lattice enumerations).
double phi_hat_upper4(const InghamMollifier& m, double v);
double phi_hat_upper_all(const InghamMollifier& m, double v);

// n = 2^log2_n samples of phi at x_i = -1/2 + i/n, i = 0..n-1, from the
// inverse transform of phi_hat over |s| <= n/2. Samples are real to 1e-10
// (asserted) and the imaginary residue is discarded.
std::vector<double> phi_grid(const InghamMollifier& m, int log2_n);

// Fits log|phi_hat(s)| against -|s|^beta_target on a log-spaced sample of
// [8, s_max]; passes when the realized decay exponent reaches beta_target and
// the worst coefficient stays bounded away from zero.
Report check_mollifier_decay(const InghamMollifier& m, double beta_target,
                             double s_max);

}  // namespace muhat
