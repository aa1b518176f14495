#include "muhat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace muhat {

namespace {

// Envelope exponent (sigma+1)/(4 sigma) of the far-range tails.
double far_exponent(double sigma) { return (sigma + 1.0) / (4.0 * sigma); }

struct RatioSweep {
  double max_ratio = 0.0;
  std::int64_t argmax = 0;
};

// max over 0 < s <= S of |value(s)| / exp(log_env(s)), log-domain.
template <typename Value, typename LogEnv>
RatioSweep sweep_ratio(std::int64_t lo, std::int64_t S, Value&& value, LogEnv&& log_env) {
  RatioSweep r;
  for (std::int64_t s = std::max<std::int64_t>(lo, 1); s <= S; ++s) {
    const double a = std::abs(value(s));
    if (a <= 0.0) continue;
    const double lr = std::log(a) - log_env(s);
    const double ratio = std::exp(lr);
    if (ratio > r.max_ratio) {
      r.max_ratio = ratio;
      r.argmax = s;
    }
  }
  return r;
}

}  // namespace

namespace {
// The envelope maximum keeps moving until the sweep covers multiples of
// block-interior primes, i.e. up to roughly (4 M)^3. Saturating.
std::int64_t stabilization_scale_of(std::int64_t M) {
  const double v = 64.0 * static_cast<double>(M) * static_cast<double>(M) *
                   static_cast<double>(M);
  if (v > 4.0e18) return std::int64_t(4000000000000000000);
  return static_cast<std::int64_t>(v);
}

CheckStatus drift_status(double drift, std::int64_t S, std::int64_t stab, bool exploratory,
                         CheckEntry& e) {
  if (S < stab) {
    e.note = "sweep below the stabilization scale (4M)^3; stability not asserted";
    return CheckStatus::recorded;
  }
  if (drift < 0.05) return CheckStatus::pass;
  e.note = "fitted constant drifts under range doubling";
  return exploratory ? CheckStatus::hypothesis_unmet : CheckStatus::fail;
}
}  // namespace

Report check_single_factor(const FactorSpectrum& f, std::int64_t S, const DecayEnvelope& env,
                           bool exploratory) {
  const std::int64_t M = f.first_scale();
  if (S < 4 * M)
    throw std::invalid_argument("check_single_factor: S must be >= 4*M");
  Report rep;
  rep.check_id = "single_factor";
  if (exploratory) rep.hypothesis_status = "exploratory";
  rep.parameter_echo = {{"variant", f.variant == FactorVariant::slow ? "slow" : "fast"},
                        {"stage", f.stage_index},
                        {"M", M},
                        {"S", S}};

  // Exact vanishing below M (log-spaced sample; every value must be exactly 0).
  {
    bool all_zero = true;
    std::int64_t checked = 0;
    const std::int64_t hi = M - 1;
    for (std::int64_t s = 1; s <= hi; s = std::max(s + 1, s + s / 64)) {
      ++checked;
      if (g_hat(f, s) != std::complex<double>{0.0, 0.0} ||
          g_hat(f, -s) != std::complex<double>{0.0, 0.0}) {
        all_zero = false;
        break;
      }
    }
    auto& e = rep.add("vanishing_below_M", all_zero ? CheckStatus::pass : CheckStatus::fail);
    e.values["sampled"] = static_cast<double>(checked);
  }

  if (f.variant == FactorVariant::slow) {
    auto value = [&](std::int64_t s) { return g_hat(f, s); };
    auto log_env = [&](std::int64_t s) {
      return log_theta(*env.profile, *env.chi, static_cast<double>(s));
    };
    const RatioSweep half = sweep_ratio(1, S / 2, value, log_env);
    RatioSweep full = half;
    for (std::int64_t s = S / 2 + 1; s <= S; ++s) {
      const double a = std::abs(value(s));
      if (a <= 0.0) continue;
      const double ratio = std::exp(std::log(a) - log_env(s));
      if (ratio > full.max_ratio) { full.max_ratio = ratio; full.argmax = s; }
    }
    const double drift =
        half.max_ratio > 0 ? std::fabs(full.max_ratio - half.max_ratio) / half.max_ratio : 0.0;
    auto& e = rep.add("theta_envelope_C1", CheckStatus::pass);
    e.status = std::isfinite(full.max_ratio)
                   ? drift_status(drift, S, stabilization_scale_of(M), exploratory, e)
                   : CheckStatus::fail;
    e.values["C1"] = full.max_ratio;
    e.values["C1_half_range"] = half.max_ratio;
    e.values["argmax_s"] = static_cast<double>(full.argmax);
    e.values["drift"] = drift;

    // Far range |s| >= psi(beta)^{-2}: usually beyond any desk table.
    const double far_start = std::exp(-2.0 * env.profile->log_psi(
                                               std::log(static_cast<double>(f.block.beta))));
    if (far_start > static_cast<double>(S)) {
      auto& fe = rep.add("far_range_C2", CheckStatus::skipped);
      fe.values["far_range_start"] = far_start;
      fe.note = "far range begins beyond the table radius at desk scale";
    } else {
      const double expn = far_exponent(env.profile->sigma);
      const double psi_beta2 = 1.0 / far_start;
      auto far_env = [&](std::int64_t s) {
        return -0.5 * std::pow(psi_beta2 * static_cast<double>(s), expn);
      };
      const RatioSweep far = sweep_ratio(static_cast<std::int64_t>(far_start), S, value, far_env);
      auto& fe = rep.add("far_range_C2",
                         std::isfinite(far.max_ratio) ? CheckStatus::pass : CheckStatus::fail);
      fe.values["C2"] = far.max_ratio;
      fe.values["argmax_s"] = static_cast<double>(far.argmax);
    }
  } else {
    auto nk = static_cast<double>(f.n_k);
    double half_max = 0.0, full_max = 0.0;
    std::int64_t argmax = 0;
    for (std::int64_t s = 1; s <= S; ++s) {
      const double v = std::abs(g_hat(f, s)) * nk;
      if (v > full_max) { full_max = v; argmax = s; }
      if (s <= S / 2) half_max = std::max(half_max, v);
    }
    const double drift = half_max > 0 ? std::fabs(full_max - half_max) / half_max : 0.0;
    auto& e = rep.add("fast_uniform_bound", CheckStatus::pass);
    // A ladder saturates once the sweep passes its last rung scale.
    const std::int64_t stab = 4 * f.rungs.back();
    e.status = std::isfinite(full_max) ? drift_status(drift, S, stab, exploratory, e)
                                       : CheckStatus::fail;
    e.values["max_abs_times_nk"] = full_max;
    e.values["argmax_s"] = static_cast<double>(argmax);
    e.values["drift"] = drift;
  }
  return rep;
}

Report check_stability(const StabilityInput& in, const SpectralAccumulator& HG,
                       const DecayEnvelope& env, bool strict) {
  Report rep;
  rep.check_id = in.lemma2 ? "stability_lemma2" : "stability_lemma1";
  rep.parameter_echo = {{"N1", in.N1}, {"N2", in.N2}, {"N3", in.N3},
                        {"sigma", in.sigma}, {"lemma2", in.lemma2}, {"delta", in.delta}};
  const bool impulse = in.G == nullptr;
  rep.hypothesis_status = HG.hypothesis_status;

  const SpectralAccumulator& H = *in.H;
  const double expn = in.lemma2 ? 0.75 : far_exponent(in.sigma);

  // Hypothesis bundle echo.
  bool hyp_ok = true;
  if (!impulse) {
    double g_max = 0.0;
    const auto lattice = support_lattice(*in.G, HG.radius_G > 0 ? HG.radius_G : HG.radius);
    const std::size_t stride = std::max<std::size_t>(1, lattice.size() / 4096);
    for (std::size_t i = 0; i < lattice.size(); i += stride)
      if (lattice[i] != 0) g_max = std::max(g_max, std::abs(g_hat(*in.G, lattice[i])));
    auto& e1 = rep.add("hyp_G_bounds", CheckStatus::pass);
    e1.values["max_abs_G_nonzero"] = g_max;
    e1.values["G_at_0"] = std::abs(g_hat(*in.G, 0));
    if (g_max > 1.0 + 1e-12) { e1.status = CheckStatus::fail; hyp_ok = false; }
    if (in.lemma2 && g_max > in.delta * (1.0 + 1e-9)) {
      e1.status = CheckStatus::hypothesis_unmet;
      e1.note = "lemma2 needs |G| <= delta off zero";
      hyp_ok = false;
    }
    const double M_G = static_cast<double>(in.G->first_scale());
    auto& e2 = rep.add("hyp_G_vanishing", M_G >= in.N2 ? CheckStatus::pass
                                                       : CheckStatus::hypothesis_unmet);
    e2.values["first_scale"] = M_G;
    e2.values["N2"] = in.N2;
    if (M_G < in.N2) hyp_ok = false;
  }
  {
    double h_max = 0.0;
    for (std::int64_t s = -H.radius; s <= H.radius; ++s)
      h_max = std::max(h_max, std::abs(H.at(s)));
    auto& e = rep.add("hyp_H_global", h_max <= 2.0 + H.trunc_err + 1e-12
                                          ? CheckStatus::pass
                                          : CheckStatus::fail);
    e.values["max_abs_H"] = h_max;
    if (e.status == CheckStatus::fail) hyp_ok = false;
  }
  if (!hyp_ok && strict)
    throw std::runtime_error("check_stability: hypothesis bundle unmet in strict mode");
  const CheckStatus demoted = hyp_ok ? CheckStatus::fail : CheckStatus::hypothesis_unmet;

  // Conclusion 1: near range, |H*G - H| vs the computable tail proxy.
  {
    const std::int64_t lim = std::min<std::int64_t>(
        {static_cast<std::int64_t>(in.N2 / 4.0) - 1, HG.radius, H.radius});
    double worst = 0.0;
    std::int64_t argmax = 0;
    for (std::int64_t s = -lim; s <= lim; ++s) {
      const double d = std::abs(HG.at(s) - H.at(s));
      if (d > worst) { worst = d; argmax = s; }
    }
    double proxy = 0.0;
    if (!impulse) {
      const std::int64_t R = HG.radius_G > 0 ? HG.radius_G : HG.radius;
      const auto lattice = support_lattice(*in.G, R);
      for (std::int64_t t : lattice) {
        if (std::llabs(t) < static_cast<std::int64_t>(in.N2)) continue;
        const double arg = static_cast<double>(std::llabs(t)) / 2.0 / (8.0 * in.N1);
        double hb = std::min(2.0, std::exp(-0.5 * std::pow(arg, expn)));
        proxy += (in.lemma2 ? in.delta : 1.0) * hb;
      }
    }
    const bool ok = impulse ? worst == 0.0 : worst <= proxy + HG.trunc_err + H.trunc_err + 1e-15;
    auto& e = rep.add("near_range_difference", ok ? CheckStatus::pass : demoted);
    e.values["max_abs_difference"] = worst;
    e.values["argmax_s"] = static_cast<double>(argmax);
    e.values["tail_proxy"] = proxy;
    e.values["log10_paper_bound_N2_pow_m99"] = -99.0 * std::log10(in.N2);
    if (impulse) e.note = "impulse fixture: exact equality required";
  }

  // Conclusion 2: mid range envelope.
  if (!in.lemma2) {
    double worst = 0.0;
    std::int64_t argmax = 0;
    for (std::int64_t s = 1; s <= HG.radius; ++s) {
      for (std::int64_t sg : {s, -s}) {
        const double a = std::abs(HG.at(sg));
        if (a <= 0.0) continue;
        const double r = std::exp(std::log(a) - env.log_value(static_cast<double>(s)));
        if (r > worst) { worst = r; argmax = sg; }
      }
    }
    auto& e = rep.add("envelope_theta_omega",
                      std::isfinite(worst) ? CheckStatus::pass : demoted);
    e.values["fitted_constant"] = worst;
    e.values["argmax_s"] = static_cast<double>(argmax);
  } else if (in.N2 / 4.0 > static_cast<double>(HG.radius)) {
    rep.add("mid_range_delta_half", CheckStatus::skipped).note =
        "mid range begins beyond the table radius";
  } else {
    double worst = 0.0;
    std::int64_t argmax = 0;
    const auto lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(in.N2 / 4.0));
    for (std::int64_t s = lo; s <= HG.radius; ++s) {
      for (std::int64_t sg : {s, -s}) {
        const double a = std::abs(HG.at(sg));
        if (a > worst) { worst = a; argmax = sg; }
      }
    }
    const double scaled = worst / std::sqrt(in.delta);
    auto& e = rep.add("mid_range_delta_half",
                      std::isfinite(scaled) ? CheckStatus::pass : demoted);
    e.values["max_abs"] = worst;
    e.values["constant_vs_sqrt_delta"] = scaled;
    e.values["argmax_s"] = static_cast<double>(argmax);
  }

  // Conclusion 3: far range |s| >= 8 N3.
  {
    const double lo_d = 8.0 * in.N3;
    if (lo_d > static_cast<double>(HG.radius)) {
      auto& e = rep.add("far_range", CheckStatus::skipped);
      e.values["far_range_start"] = lo_d;
      e.note = "far range begins beyond the table radius at desk scale";
    } else {
      const auto lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(lo_d));
      double worst = 0.0;
      for (std::int64_t s = lo; s <= HG.radius; ++s) {
        const double envv =
            std::exp(-0.5 * std::pow(static_cast<double>(s) / (8.0 * in.N3), expn));
        worst = std::max(worst, std::max(std::abs(HG.at(s)), std::abs(HG.at(-s))) /
                                    std::max(envv, 1e-300));
      }
      auto& e = rep.add("far_range", std::isfinite(worst) ? CheckStatus::pass : demoted);
      e.values["fitted_constant"] = worst;
    }
  }
  return rep;
}

Report check_mu_estimates(const SpectralAccumulator& acc, const DecayEnvelope& env,
                          std::int64_t S, std::int64_t stabilization_scale) {
  Report rep;
  rep.check_id = "mu_estimates";
  rep.hypothesis_status = acc.hypothesis_status;
  rep.parameter_echo = {{"k", acc.k}, {"S", S}, {"trunc_err", acc.trunc_err},
                        {"variant", acc.variant}};

  {
    const double mass = std::abs(acc.at(0));
    auto& e = rep.add("mass_bound", mass <= 2.0 + acc.trunc_err ? CheckStatus::pass
                                                                : CheckStatus::fail);
    e.values["abs_mu_hat_0"] = mass;
    e.values["bound"] = 2.0 + acc.trunc_err;
  }

  if (acc.variant == "fast") {
    rep.add("envelope_constant", CheckStatus::skipped).note =
        "theta-envelope applies to the block variant; ladders use mu_estimates_fast";
    return rep;
  }

  const std::int64_t lim = std::min(S, acc.radius);
  double half_max = 0.0, full_max = 0.0;
  std::int64_t argmax = 0;
  for (std::int64_t s = 1; s <= lim; ++s) {
    for (std::int64_t sg : {s, -s}) {
      const double a = std::abs(acc.at(sg));
      if (a <= 0.0) continue;
      const double r = std::exp(std::log(a) - env.log_value(static_cast<double>(s)));
      if (r > full_max) { full_max = r; argmax = sg; }
      if (s <= lim / 2) half_max = std::max(half_max, r);
    }
  }
  const double drift = half_max > 0 ? std::fabs(full_max - half_max) / half_max : 0.0;
  auto& e = rep.add("envelope_constant", CheckStatus::pass);
  e.status = std::isfinite(full_max)
                 ? drift_status(drift, lim, stabilization_scale,
                                acc.hypothesis_status == "exploratory", e)
                 : CheckStatus::fail;
  e.values["fitted_constant"] = full_max;
  e.values["argmax_s"] = static_cast<double>(argmax);
  e.values["drift"] = drift;
  if (acc.k == 1 && e.note.empty()) e.note = "k=1 reduces to the single-factor ratios";
  return rep;
}

std::vector<std::int64_t> fast_sweep_candidates(const FastMuSweep& sweep) {
  if (sweep.stages.empty()) throw std::invalid_argument("fast sweep: no stages");
  const FactorSpectrum& last = sweep.stages.back();
  const std::int64_t lo = last.first_scale() / 4;
  const std::int64_t S2 = 2 * sweep.S;
  // Deterministic candidate set: log-spaced anchors snapped to the support
  // lattice families (rung multiples, first-stage multiples, and sums).
  std::set<std::int64_t> cand;
  const double llo = std::log(static_cast<double>(std::max<std::int64_t>(lo, 1)));
  const double lhi = std::log(static_cast<double>(S2));
  const FactorSpectrum& first = sweep.stages.front();
  for (int i = 0; i < sweep.targets; ++i) {
    const double x = std::exp(llo + (lhi - llo) * i / std::max(1, sweep.targets - 1));
    auto snap = [&](std::int64_t q) {
      if (q <= 0) return;
      const auto a = static_cast<std::int64_t>(std::llround(x / static_cast<double>(q)));
      for (std::int64_t da : {-1, 0, 1}) {
        const std::int64_t s = (a + da) * q;
        if (s >= lo && s <= S2) cand.insert(s);
      }
    };
    for (std::int64_t q : last.rungs) snap(q);
    for (std::int64_t q : first.rungs) snap(q);
    // Sums rung-multiple + first-stage-multiple near the anchor.
    for (std::int64_t q2 : last.rungs) {
      const auto a = static_cast<std::int64_t>(std::llround(x / static_cast<double>(q2)));
      if (a == 0) continue;
      const std::int64_t base = a * q2;
      for (std::int64_t q1 : first.rungs) {
        const auto b = static_cast<std::int64_t>(
            std::llround(static_cast<double>(x - static_cast<double>(base)) /
                         static_cast<double>(q1)));
        const std::int64_t s = base + b * q1;
        if (s >= lo && s <= S2) cand.insert(s);
      }
    }
  }
  return {cand.begin(), cand.end()};
}

Report check_mu_estimates_fast(const FastMuSweep& sweep) {
  Report rep;
  rep.check_id = "mu_estimates_fast";
  const FactorSpectrum& last = sweep.stages.back();
  const std::int64_t Mk = last.first_scale();
  const auto nk = static_cast<double>(last.n_k);
  rep.parameter_echo = {{"k", static_cast<int>(sweep.stages.size())},
                        {"M_k", Mk}, {"S", sweep.S}, {"n_k", last.n_k}};
  const auto cand = fast_sweep_candidates(sweep);

  double max_S = 0.0, max_2S = 0.0;
  std::int64_t argmax = 0;
  for (std::int64_t s : cand) {
    const double v = std::abs(mu_hat_fast_eval(sweep.stages, s)) * std::sqrt(nk);
    if (s <= sweep.S && v > max_S) { max_S = v; argmax = s; }
    max_2S = std::max(max_2S, v);
  }
  const double drift = max_S > 0 ? (max_2S - max_S) / max_S : 0.0;
  const bool ok = std::isfinite(max_S) && max_S > 0.0 && drift < 0.05;
  auto& e = rep.add("fast_decay_bound", ok ? CheckStatus::pass : CheckStatus::fail);
  e.values["max_abs_times_sqrt_nk"] = max_S;
  e.values["max_at_doubled_range"] = max_2S;
  e.values["argmax_s"] = static_cast<double>(argmax);
  e.values["candidates"] = static_cast<double>(cand.size());
  e.values["drift"] = drift;
  return rep;
}

Report check_cauchy(const std::vector<const SpectralAccumulator*>& accs,
                    const std::vector<std::int64_t>& M,
                    const std::vector<double>& stage_diff_proxy) {
  if (accs.size() < 2) {
    Report rep;
    rep.check_id = "cauchy";
    rep.add("insufficient_stages", CheckStatus::skipped).note =
        "needs >= 2 accumulators from nested stages";
    return rep;
  }
  if (accs.size() != M.size() || accs.size() != stage_diff_proxy.size())
    throw std::invalid_argument("check_cauchy: mismatched schedules");
  Report rep;
  rep.check_id = "cauchy";
  for (std::size_t l = 0; l < accs.size(); ++l) {
    for (std::size_t k = l + 1; k < accs.size(); ++k) {
      const std::int64_t lim = std::min<std::int64_t>(
          {M[l] / 4 - 1, accs[l]->radius, accs[k]->radius});
      double worst = 0.0;
      std::int64_t argmax = 0;
      for (std::int64_t s = -lim; s <= lim; ++s) {
        const double d = std::abs(accs[l]->at(s) - accs[k]->at(s));
        if (d > worst) { worst = d; argmax = s; }
      }
      double proxy = accs[l]->trunc_err + accs[k]->trunc_err;
      for (std::size_t j = l + 1; j <= k; ++j) proxy += stage_diff_proxy[j];
      auto& e = rep.add("pair_" + std::to_string(l + 1) + "_" + std::to_string(k + 1),
                        worst <= proxy + 1e-15 ? CheckStatus::pass : CheckStatus::fail);
      e.values["max_abs_difference"] = worst;
      e.values["argmax_s"] = static_cast<double>(argmax);
      e.values["proxy"] = proxy;
      e.values["range"] = static_cast<double>(lim);
      if (accs[k]->hypothesis_status == "exploratory") rep.hypothesis_status = "exploratory";
    }
  }
  return rep;
}

Report kahane_extension(const std::vector<double>& mu_grid_samples,
                        const std::function<std::complex<double>(std::int64_t)>& table,
                        const DecayEnvelope& env, const std::vector<double>& xis,
                        double integer_constant) {
  Report rep;
  rep.check_id = "kahane_extension";
  rep.parameter_echo = {{"samples", mu_grid_samples.size()},
                        {"integer_constant", integer_constant}};

  // Consistency at integer frequencies: quadrature vs the table.
  {
    double worst = 0.0;
    for (std::int64_t s : {0L, 1L, 2L, 5L, 17L}) {
      const auto q = grid_transform_at(mu_grid_samples, static_cast<double>(s));
      worst = std::max(worst, std::abs(q - table(s)));
    }
    auto& e = rep.add("integer_consistency", worst < 1e-6 ? CheckStatus::pass
                                                          : CheckStatus::fail);
    e.values["max_abs_difference"] = worst;
  }

  // Continuity at 0+.
  {
    const auto v0 = table(0);
    double worst = 0.0;
    for (double xi : {1e-3, 1e-4, 1e-5})
      worst = std::max(worst, std::abs(grid_transform_at(mu_grid_samples, xi) - v0));
    auto& e = rep.add("continuity_at_zero", worst < 1e-2 ? CheckStatus::pass
                                                         : CheckStatus::fail);
    e.values["max_abs_difference"] = worst;
  }

  double real_c = 0.0;
  double worst_xi = 0.0;
  for (double xi : xis) {
    if (!(xi >= 1.0)) continue;
    const double a = std::abs(grid_transform_at(mu_grid_samples, xi));
    if (a <= 0.0) continue;
    const double r = std::exp(std::log(a) - env.log_value(xi));
    if (r > real_c) { real_c = r; worst_xi = xi; }
  }
  auto& e = rep.add("real_frequency_envelope",
                    real_c <= 8.0 * integer_constant ? CheckStatus::pass : CheckStatus::fail);
  e.values["real_constant"] = real_c;
  e.values["argmax_xi"] = worst_xi;
  e.values["allowed"] = 8.0 * integer_constant;
  e.note = "8x inflation reflects the doubling-based extension argument";
  return rep;
}

}  // namespace muhat
