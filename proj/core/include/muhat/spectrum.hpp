#pragma once

// Single-stage factors g_k (slow block variant and fast ladder variant),
// exact spectral evaluation via the divisor formula, truncated iterated
// convolution with propagated error bounds, the grid/FFT oracle and the
// support-interval system.

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "muhat/approx.hpp"
#include "muhat/mollifier.hpp"
#include "muhat/scales.hpp"

namespace muhat {

enum class FactorVariant { slow, fast };

// One stage factor with everything precomputed for coefficient evaluation.
struct FactorSpectrum {
  FactorVariant variant = FactorVariant::slow;
  int stage_index = 1;  // k
  std::shared_ptr<const InghamMollifier> mollifier;

  // slow: primes of the block with psi(q) and 1/(q chi(q) C) precomputed.
  PrimeBlock block;
  std::vector<double> psi_q;
  std::vector<double> weight_q;  // 1 / (q chi(q) C)
  double C = 1.0;

  // fast: the rung primes with psi(q_{k,j}) precomputed; weight 1/n_k.
  std::vector<std::int64_t> rungs;
  std::vector<double> psi_rung;
  std::int64_t n_k = 0;

  std::int64_t first_scale() const {  // M_k: smallest prime of the stage
    return variant == FactorVariant::slow ? block.M
                                          : (rungs.empty() ? 0 : rungs.front());
  }
};

FactorSpectrum make_factor_slow(const PrimeBlock& block, const ApproximationProfile& profile,
                                const DivergenceWeight& chi,
                                std::shared_ptr<const InghamMollifier> moll, int stage_index);
FactorSpectrum make_factor_fast(const RajchmanStage& stage, const ApproximationProfile& profile,
                                std::shared_ptr<const InghamMollifier> moll, int stage_index);

// Divisor formula. g_hat(0) = 1 exactly; g_hat(s) = 0 exactly for
// 0 < |s| < M_k (divisibility short-circuit against the explicit prime list).
std::complex<double> g_hat(const FactorSpectrum& f, std::int64_t s);

// Rigorous decreasing bound on |g_hat| at arguments >= u (4-sinc majorant
// summed over stage primes, no divisibility credit).
double g_hat_upper_bound(const FactorSpectrum& f, double u);

// Support lattice of g_hat within [-radius, radius]: 0 and the multiples of
// the stage primes, sorted ascending |t| with the negative of a pair first.
std::vector<std::int64_t> support_lattice(const FactorSpectrum& f, std::int64_t radius);

// Sum over |t| > R of |g_hat(t)| * H_bound(|t| - s_max), where H_bound is a
// decreasing majorant of the partner table. Used for trunc_err propagation.
double convolution_tail_bound(const FactorSpectrum& g,
                              const std::function<double(double)>& H_bound,
                              std::int64_t R, std::int64_t s_max);

// Divisor structure of a single-stage partner: |H(u)| vanishes off the
// channel lattices, so tail terms only align with each channel prime once
// per q spacing. Gives the pair-lattice tail bound, far tighter than the
// pointwise envelope.
struct DivisorEnvelope {
  struct Channel {
    std::int64_t q = 0;
    double w = 0.0;    // per-hit weight bound 1/(q chi(q) C)
    double psi = 0.0;  // phi_hat argument scale
  };
  std::vector<Channel> channels;
  std::shared_ptr<const InghamMollifier> mollifier;
};

double convolution_tail_bound(const FactorSpectrum& g, const DivisorEnvelope& H,
                              std::int64_t R, std::int64_t s_max);

// mu_hat_k as a truncated dense coefficient table over [-radius, radius].
struct SpectralAccumulator {
  int k = 0;
  std::int64_t radius = 0;
  std::vector<std::complex<double>> coeffs;  // index s + radius
  double trunc_err = 0.0;  // uniform bound on |stored - true| over the table
  std::string hypothesis_status = "strict";
  std::uint64_t config_hash = 0;
  std::string variant = "slow";
  double eps = 0.0;           // requested tail budget
  bool eps_met = true;        // false when the radius cap bound the tail
  std::int64_t radius_G = 0;  // factor-lattice radius used by the last stage
  // Bound on |mu_hat_k - mu_hat_{k-1}| near 0 (Cauchy diagnostics).
  double stage_diff_proxy = 0.0;
  // In-process decreasing majorant of |table| beyond the radius; not
  // serialized (verification over loaded artifacts never convolves further).
  std::function<double(double)> h_env;
  // Divisor structure when the table is a single exact stage (k = 1).
  std::shared_ptr<const DivisorEnvelope> h_divisor_env;

  std::complex<double> at(std::int64_t s) const;
  bool hermitian_within(double tol) const;
};

// k = 0 identity of convolution: the unit impulse at 0.
SpectralAccumulator unit_impulse(std::int64_t radius);

// k = 1 table filled directly from g_hat; exact (trunc_err = 0).
SpectralAccumulator accumulate_factor(const FactorSpectrum& g, std::int64_t radius);

// (H*G)(s) = sum_t H(s-t) G(t) over the support lattice of G within radius R,
// deterministic order (ascending |t|, negative first). R is the smallest
// radius on a doubling ladder from 4*S whose tail bound is <= eps, capped at
// radius_max; the cap marks the accumulator exploratory-eps. Requires
// acc.radius >= S + R (refusal names the required radius).
SpectralAccumulator convolve_stage(const SpectralAccumulator& acc, const FactorSpectrum& g,
                                   std::int64_t S, double eps, std::int64_t radius_max);

// Smallest u beyond which the all-factor majorant of |g_hat| stays below cut.
double significance_window(const FactorSpectrum& f, double cut);

// Pointwise evaluation of (H * g_hat)(s) where H is any evaluator that is
// negligible beyond H_window: the sum runs over the lattice points of g
// within [s - W, s + W] plus t = 0. Deep (fast-variant) stages use this
// instead of dense tables.
std::complex<double> convolve_eval_at(const std::function<std::complex<double>(std::int64_t)>& H,
                                      const FactorSpectrum& g, std::int64_t s,
                                      double lattice_cut, double H_window);

// mu_hat_k(s) for a fast-variant two-stage schedule, evaluated sparsely.
std::complex<double> mu_hat_fast_eval(const std::vector<FactorSpectrum>& stages, std::int64_t s,
                                      double lattice_cut = 1e-18);

// ---- grid / FFT oracle ------------------------------------------------

// Spatial synthesis of g on n = 2^log2_n samples over [0,1): every bump
// amplitude * phi((x - p/q)/psi(q)), p = 1..q. Refuses when the narrowest
// bump spans fewer than 16 cells.
std::vector<double> g_grid(const FactorSpectrum& f, int log2_n);

struct GridCoefficients {
  std::vector<std::complex<double>> coeffs;  // s = -n/2 .. n/2-1, index s + n/2
  double quadrature_err = 0.0;               // alias-tail estimate
  std::complex<double> at(std::int64_t s) const;
};

// Pointwise product of g_grid over stages 1..k, then the discrete transform.
GridCoefficients mu_grid_oracle(const std::vector<FactorSpectrum>& stages, int k, int log2_n);

// Quadrature evaluation of the grid measure at real (non-integer) xi.
std::complex<double> grid_transform_at(const std::vector<double>& samples, double xi);

// ---- support intervals -------------------------------------------------

enum class RadiusConvention { half, full };  // psi(q)/2 for measures, psi(q) for covers

struct Interval {
  double lo, hi;
  double length() const { return hi - lo; }
};

struct StageIntervals {
  std::vector<Interval> merged;   // sorted disjoint; clipped to [0,1]
  double sum_of_lengths = 0.0;    // Sigma_q q psi(q) (before merging), exact
  double merged_length = 0.0;
};

struct IntervalSystem {
  std::vector<StageIntervals> stages;      // per stage union
  std::vector<StageIntervals> running;     // running intersection
};

// Explicit interval system for stages whose Sigma_q q stays below an
// enumeration cap; throws otherwise (deep stages support membership only).
IntervalSystem support_system(const std::vector<FactorSpectrum>& stages, int k,
                              RadiusConvention conv = RadiusConvention::half,
                              std::int64_t enumeration_cap = std::int64_t(1) << 23);

// true iff x lies in the stage-j running intersection, j = 1..k. Binary
// search on the merged lists when available, direct nearest-p/q distance
// otherwise.
std::vector<bool> membership(double x, const std::vector<FactorSpectrum>& stages,
                             RadiusConvention conv = RadiusConvention::half);

// ---- coefficient table round trips --------------------------------------

// CSV columns: s, re, im, abs, envelope, ratio, trunc_err (envelope/ratio
// empty at s = 0). Binary format is bit-exact.
void write_coeffs_csv(const std::string& path, const SpectralAccumulator& acc,
                      const DecayEnvelope& env, std::int64_t emit_radius);
void write_accumulator_binary(const std::string& path, const SpectralAccumulator& acc);
SpectralAccumulator read_accumulator_binary(const std::string& path);

}  // namespace muhat
