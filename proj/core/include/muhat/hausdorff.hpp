#pragma once

// The two-level cover of F_alpha, the alpha-cover sum, the interval-counting
// estimate and the log(gamma) prime-block identity.

#include <cstdint>
#include <vector>

#include "muhat/approx.hpp"
#include "muhat/report.hpp"
#include "muhat/spectrum.hpp"

namespace muhat {

struct CoverReport {
  int k = 0;
  double gamma = 0.0;            // block exponent when the policy is power
  std::int64_t cover_cardinality = 0;   // members with nonempty intersection
  double cover_sum = 0.0;        // Sigma_U alpha(diam U)
  // Counting statistics per (J, q), aggregated: the exact bound
  // |count - q |J'|| <= 1 holds for every pair; the two-sided ratio in
  // [0.5, 2] is asserted only for pairs with q |J'| >= ratio_floor.
  std::int64_t pairs = 0;
  std::int64_t pairs_ratio_checked = 0;
  double worst_ratio_low = 1.0;
  double worst_ratio_high = 1.0;
  std::int64_t counting_bound_violations = 0;  // |count - q|J'|| > 1 (never)
  double ratio_floor = 8.0;
  bool ratio_ok = true;
};

// Enumerates U = J cap [p/q - psi(q), p/q + psi(q)] over J in the previous
// stage system (I_0 = {[0,1]} at k = 1), block primes q, residues p = 0..q-1.
// Counts come from the endpoint formula floor(qb) - ceil(qa) + 1; the cover
// sum adds alpha(2 psi(q)) per interior member and the exact diameter for the
// <= 2 boundary members per (J, q). Requires alpha(psi(q)) q^2 = 1 to 1e-9.
CoverReport build_cover(const std::vector<FactorSpectrum>& stages, int k,
                        const DimensionFunction& alpha,
                        const ApproximationProfile& profile,
                        double ratio_floor = 8.0);

struct BlockReciprocalSum {
  std::int64_t M = 0;
  std::int64_t beta = 0;  // greatest prime <= M^gamma
  double gamma = 0.0;
  double sum = 0.0;       // Sigma 1/q over primes in [M, M^gamma]
  double log_gamma = 0.0;
  double deviation = 0.0;
};

// Sigma_{M <= q <= M^gamma} 1/q and its deviation from log gamma.
BlockReciprocalSum block_reciprocal_sum(std::int64_t M, double gamma);

// Cover sums per stage and the decay fit against M_{k-1}^{-tau+2}; passes
// when the sums strictly decrease and the fitted exponent is negative.
Report cover_sum_trend(const std::vector<FactorSpectrum>& stages,
                       const DimensionFunction& alpha,
                       const ApproximationProfile& profile, int k_max);

}  // namespace muhat
