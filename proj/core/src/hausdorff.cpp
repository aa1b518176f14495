#include "muhat/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "muhat/sieve.hpp"

namespace muhat {

namespace {

struct JInterval {
  double lo, hi;
};

// I_{k-1} in the cover convention: full psi(q) radius, residues 0..q-1.
// I_0 = {[0,1]}.
std::vector<JInterval> cover_previous_system(const std::vector<FactorSpectrum>& stages, int k,
                                             std::int64_t cap) {
  std::vector<JInterval> J;
  if (k == 1) {
    J.push_back({0.0, 1.0});
    return J;
  }
  const FactorSpectrum& f = stages[static_cast<std::size_t>(k - 2)];
  const auto& primes = f.variant == FactorVariant::slow ? f.block.primes : f.rungs;
  const auto& psis = f.variant == FactorVariant::slow ? f.psi_q : f.psi_rung;
  std::int64_t count = 0;
  for (std::int64_t q : primes) count += q;
  if (count > cap)
    throw std::runtime_error("build_cover: previous-stage system has " + std::to_string(count) +
                             " intervals, beyond the enumeration cap");
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const auto q = static_cast<double>(primes[i]);
    for (std::int64_t p = 0; p < primes[i]; ++p) {
      const double c = static_cast<double>(p) / q;
      J.push_back({c - psis[i], c + psis[i]});
    }
  }
  return J;
}

}  // namespace

CoverReport build_cover(const std::vector<FactorSpectrum>& stages, int k,
                        const DimensionFunction& alpha, const ApproximationProfile& profile,
                        double ratio_floor) {
  if (k < 1 || k > static_cast<int>(stages.size()))
    throw std::invalid_argument("build_cover: stage out of range");
  const FactorSpectrum& f = stages[static_cast<std::size_t>(k - 1)];
  const auto& primes = f.variant == FactorVariant::slow ? f.block.primes : f.rungs;
  const auto& psis = f.variant == FactorVariant::slow ? f.psi_q : f.psi_rung;

  // alpha must be matched to psi: alpha(psi(q)) q^2 = 1 to 1e-9.
  for (std::size_t i = 0; i < primes.size(); i += std::max<std::size_t>(1, primes.size() / 64)) {
    const double lq = std::log(static_cast<double>(primes[i]));
    const double resid = alpha.log_alpha(profile.log_psi(lq)) + 2.0 * lq;
    if (std::fabs(resid) > 1e-9 * std::max(1.0, std::fabs(2.0 * lq)))
      throw std::invalid_argument(
          "build_cover: alpha(psi(q)) q^2 = 1 fails at q = " + std::to_string(primes[i]) +
          " (log residual " + format_double(resid) + "); alpha is not matched to psi");
  }

  const auto J_list = cover_previous_system(stages, k, std::int64_t(1) << 23);

  CoverReport rep;
  rep.k = k;
  rep.ratio_floor = ratio_floor;

  // alpha(2 psi(q)) per prime, reused across J.
  std::vector<double> alpha_2psi(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i)
    alpha_2psi[i] = std::exp(alpha.log_alpha(std::log(2.0 * psis[i])));

  for (const auto& J : J_list) {
    const double lenJ = J.hi - J.lo;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      const std::int64_t qi = primes[i];
      const auto q = static_cast<double>(qi);
      const double r = psis[i];
      const double a = J.lo - r, b = J.hi + r;  // widened J'
      const auto p_lo_raw = static_cast<std::int64_t>(std::ceil(q * a - 1e-12));
      const auto p_hi_raw = static_cast<std::int64_t>(std::floor(q * b + 1e-12));
      const std::int64_t count_raw = std::max<std::int64_t>(0, p_hi_raw - p_lo_raw + 1);
      // Exact counting bound from the endpoint argument.
      if (std::fabs(static_cast<double>(count_raw) - q * (b - a)) > 1.0 + 1e-9)
        ++rep.counting_bound_violations;

      const std::int64_t p_lo = std::max<std::int64_t>(p_lo_raw, 0);
      const std::int64_t p_hi = std::min<std::int64_t>(p_hi_raw, qi - 1);
      const std::int64_t count = std::max<std::int64_t>(0, p_hi - p_lo + 1);
      ++rep.pairs;
      rep.cover_cardinality += count;

      if (q * (b - a) >= ratio_floor) {
        const double ratio = static_cast<double>(count) / (q * lenJ);
        rep.worst_ratio_low = std::min(rep.worst_ratio_low, ratio);
        rep.worst_ratio_high = std::max(rep.worst_ratio_high, ratio);
        ++rep.pairs_ratio_checked;
      }
      if (count == 0) continue;

      // Interior members have diameter exactly 2 psi(q); at most two boundary
      // members per (J, q) need their exact diameter.
      const auto pi_lo =
          std::max<std::int64_t>(static_cast<std::int64_t>(std::ceil(q * (J.lo + r) - 1e-12)), 0);
      const auto pi_hi = std::min<std::int64_t>(
          static_cast<std::int64_t>(std::floor(q * (J.hi - r) + 1e-12)), qi - 1);
      const std::int64_t interior = std::max<std::int64_t>(0, pi_hi - pi_lo + 1);
      rep.cover_sum += static_cast<double>(interior) * alpha_2psi[i];
      for (std::int64_t p = p_lo; p <= p_hi; ++p) {
        if (p >= pi_lo && p <= pi_hi) {
          p = pi_hi;  // skip the interior run
          continue;
        }
        const double c = static_cast<double>(p) / q;
        const double d = std::min(c + r, J.hi) - std::max(c - r, J.lo);
        if (d > 0.0) rep.cover_sum += std::exp(alpha.log_alpha(std::log(d)));
      }
    }
  }
  rep.ratio_ok = rep.worst_ratio_low >= 0.5 && rep.worst_ratio_high <= 2.0;
  return rep;
}

BlockReciprocalSum block_reciprocal_sum(std::int64_t M, double gamma) {
  if (M < 2) throw std::invalid_argument("block_reciprocal_sum: M >= 2");
  if (!(gamma >= 1.0)) throw std::invalid_argument("block_reciprocal_sum: gamma >= 1");
  BlockReciprocalSum r;
  r.M = M;
  r.gamma = gamma;
  r.log_gamma = std::log(gamma);
  const long double target =
      std::pow(static_cast<long double>(M), static_cast<long double>(gamma));
  if (target > static_cast<long double>(kSieveValueCap))
    throw StrictRefusal("block_reciprocal_sum: M^gamma exceeds the sieve domain",
                        format_double(static_cast<double>(target)));
  const auto hi = static_cast<std::int64_t>(std::floor(target + 1e-9L));
  double sum = 0.0;
  std::int64_t beta = 0;
  if (hi >= M)
    for_primes(M, hi, [&](std::int64_t p) {
      sum += 1.0 / static_cast<double>(p);
      beta = p;
      return true;
    });
  r.sum = sum;
  r.beta = beta;
  r.deviation = std::fabs(sum - r.log_gamma);
  return r;
}

Report cover_sum_trend(const std::vector<FactorSpectrum>& stages,
                       const DimensionFunction& alpha, const ApproximationProfile& profile,
                       int k_max) {
  Report rep;
  rep.check_id = "cover_sum_trend";
  rep.parameter_echo = {{"k_max", k_max}, {"tau", profile.tau},
                        {"target_exponent", -profile.tau + 2.0}};
  if (k_max < 2) {
    auto& e = rep.add("insufficient_depth", CheckStatus::skipped);
    e.note = "a trend needs at least two stages";
    return rep;
  }
  std::vector<double> sums, logM_prev;
  for (int k = 1; k <= k_max; ++k) {
    const auto cover = build_cover(stages, k, alpha, profile);
    auto& e = rep.add("cover_sum_k" + std::to_string(k), CheckStatus::recorded);
    e.values["sum"] = cover.cover_sum;
    e.values["cardinality"] = static_cast<double>(cover.cover_cardinality);
    sums.push_back(cover.cover_sum);
    logM_prev.push_back(
        k == 1 ? 0.0
               : std::log(static_cast<double>(stages[static_cast<std::size_t>(k - 2)].first_scale())));
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < sums.size(); ++i)
    if (!(sums[i] < sums[i - 1])) decreasing = false;
  // Fit log(sum_k) against log(M_{k-1}), M_0 = 1.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    sx += logM_prev[i];
    sy += std::log(sums[i]);
    sxx += logM_prev[i] * logM_prev[i];
    sxy += logM_prev[i] * std::log(sums[i]);
  }
  const auto nn = static_cast<double>(sums.size());
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  const double target = -profile.tau + 2.0;
  auto& e = rep.add("decay_fit", (decreasing && slope < 0.0) ? CheckStatus::pass
                                                             : CheckStatus::fail);
  e.values["fitted_exponent"] = slope;
  e.values["target_exponent"] = target;
  e.values["strictly_decreasing"] = decreasing ? 1.0 : 0.0;
  if (std::fabs(slope - target) > 0.5)
    e.note = "subpolynomial slack dominates the fit at small M";
  return rep;
}

}  // namespace muhat
