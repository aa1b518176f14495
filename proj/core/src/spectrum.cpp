#include "muhat/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>

namespace muhat {

namespace {

double psi_of(const ApproximationProfile& p, std::int64_t q) {
  return std::exp(p.log_psi(std::log(static_cast<double>(q))));
}

// Deterministic lattice order: ascending |t|, the negative of a pair first.
struct LatticeOrder {
  bool operator()(std::int64_t a, std::int64_t b) const {
    const std::int64_t aa = std::llabs(a), ab = std::llabs(b);
    if (aa != ab) return aa < ab;
    return a < b;
  }
};

}  // namespace

FactorSpectrum make_factor_slow(const PrimeBlock& block, const ApproximationProfile& profile,
                                const DivergenceWeight& chi,
                                std::shared_ptr<const InghamMollifier> moll, int stage_index) {
  if (block.primes.empty())
    throw std::invalid_argument("make_factor_slow: block has no primes");
  if (!moll) throw std::invalid_argument("make_factor_slow: mollifier required");
  FactorSpectrum f;
  f.variant = FactorVariant::slow;
  f.stage_index = stage_index;
  f.mollifier = std::move(moll);
  f.block = block;
  f.C = block.C;
  f.psi_q.reserve(block.primes.size());
  f.weight_q.reserve(block.primes.size());
  for (std::int64_t q : block.primes) {
    f.psi_q.push_back(psi_of(profile, q));
    f.weight_q.push_back(1.0 /
                         (static_cast<double>(q) * chi(static_cast<double>(q)) * block.C));
  }
  return f;
}

FactorSpectrum make_factor_fast(const RajchmanStage& stage, const ApproximationProfile& profile,
                                std::shared_ptr<const InghamMollifier> moll, int stage_index) {
  if (stage.rungs.empty()) throw std::invalid_argument("make_factor_fast: empty rung list");
  if (!moll) throw std::invalid_argument("make_factor_fast: mollifier required");
  FactorSpectrum f;
  f.variant = FactorVariant::fast;
  f.stage_index = stage_index;
  f.mollifier = std::move(moll);
  f.rungs = stage.rungs;
  f.n_k = stage.n;
  f.psi_rung.reserve(stage.rungs.size());
  for (std::int64_t q : stage.rungs) f.psi_rung.push_back(psi_of(profile, q));
  return f;
}

std::complex<double> g_hat(const FactorSpectrum& f, std::int64_t s) {
  if (s == 0) return {1.0, 0.0};
  const std::int64_t as = std::llabs(s);
  if (as < f.first_scale()) return {0.0, 0.0};
  std::complex<double> acc{0.0, 0.0};
  if (f.variant == FactorVariant::slow) {
    for (std::size_t i = 0; i < f.block.primes.size(); ++i) {
      const std::int64_t q = f.block.primes[i];
      if (q > as) break;
      if (s % q != 0) continue;
      acc += phi_hat(*f.mollifier, f.psi_q[i] * static_cast<double>(s)) * f.weight_q[i];
    }
  } else {
    for (std::size_t i = 0; i < f.rungs.size(); ++i) {
      const std::int64_t q = f.rungs[i];
      if (q > as) break;
      if (s % q != 0) continue;
      acc += phi_hat(*f.mollifier, f.psi_rung[i] * static_cast<double>(s)) /
             static_cast<double>(f.n_k);
    }
  }
  return acc;
}

double g_hat_upper_bound(const FactorSpectrum& f, double u) {
  u = std::fabs(u);
  double bound = 0.0;
  if (f.variant == FactorVariant::slow) {
    for (std::size_t i = 0; i < f.block.primes.size(); ++i)
      bound += phi_hat_upper4(*f.mollifier, f.psi_q[i] * u) * f.weight_q[i];
  } else {
    for (std::size_t i = 0; i < f.rungs.size(); ++i)
      bound += phi_hat_upper4(*f.mollifier, f.psi_rung[i] * u) / static_cast<double>(f.n_k);
  }
  return bound;
}

std::vector<std::int64_t> support_lattice(const FactorSpectrum& f, std::int64_t radius) {
  std::vector<std::int64_t> pts;
  pts.push_back(0);
  const auto& primes = f.variant == FactorVariant::slow ? f.block.primes : f.rungs;
  for (std::int64_t q : primes)
    for (std::int64_t t = q; t <= radius; t += q) {
      pts.push_back(t);
      pts.push_back(-t);
    }
  std::sort(pts.begin(), pts.end(), LatticeOrder{});
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double convolution_tail_bound(const FactorSpectrum& g, const DivisorEnvelope& H,
                              std::int64_t R, std::int64_t s_max) {
  // sum over |t| > R, t = m q2 in lattice(g), of |g_hat(t)| |H(s - t)|,
  // uniform over |s| <= s_max. H vanishes off its channel lattices, so the
  // (q1, q2) pair contributes one hit per q1 steps of m plus a worst-phase
  // first hit. Decreasing integrands are summed on a left-endpoint geometric
  // grid (an upper bound).
  const auto& primes = g.variant == FactorVariant::slow ? g.block.primes : g.rungs;
  double total = 0.0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const std::int64_t q2 = primes[i];
    const double psi2 = g.variant == FactorVariant::slow ? g.psi_q[i] : g.psi_rung[i];
    const double w2 = g.variant == FactorVariant::slow ? g.weight_q[i]
                                                       : 1.0 / static_cast<double>(g.n_k);
    const double m0 = std::floor(static_cast<double>(R) / static_cast<double>(q2)) + 1.0;
    for (const auto& ch : H.channels) {
      auto term = [&](double m) {
        const double t = m * static_cast<double>(q2);
        const double uH = std::max(t - static_cast<double>(s_max), t / 2.0);
        return std::min(1.0, phi_hat_upper4(*g.mollifier, psi2 * t)) * w2 *
               std::min(1.0, phi_hat_upper4(*H.mollifier, ch.psi * uH)) * ch.w;
      };
      // Worst-phase first hit plus density 1/q1 of aligned m.
      double sum = term(m0);
      const double inv_q1 = 1.0 / static_cast<double>(ch.q);
      double m = m0;
      for (int it = 0; it < 400; ++it) {
        const double m_next = std::max(m + 1.0, m * 1.25);
        const double f_here = term(m);
        sum += f_here * (m_next - m) * inv_q1;
        if (f_here * m * inv_q1 < 1e-22 && f_here < 1e-22) break;
        m = m_next;
      }
      total += sum;
    }
  }
  return total;
}

double convolution_tail_bound(const FactorSpectrum& g,
                              const std::function<double(double)>& H_bound, std::int64_t R,
                              std::int64_t s_max) {
  // sum_{|t| > R, t in lattice(g)} |g_hat(t)| * |H(s - t)| with |g_hat|
  // bounded per prime by the 4-sinc majorant and |H(s-t)| <= H_bound(|t| - s_max).
  // Decreasing integrands are summed by a left-endpoint geometric grid, an
  // upper bound of the exact sum.
  const auto& primes = g.variant == FactorVariant::slow ? g.block.primes : g.rungs;
  double total = 0.0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const std::int64_t q = primes[i];
    const double psi = g.variant == FactorVariant::slow ? g.psi_q[i] : g.psi_rung[i];
    const double w = g.variant == FactorVariant::slow ? g.weight_q[i]
                                                      : 1.0 / static_cast<double>(g.n_k);
    auto term = [&](double m) {
      const double t = m * static_cast<double>(q);
      const double hb = H_bound(std::max(t - static_cast<double>(s_max), t / 2.0));
      return 2.0 * std::min(1.0, phi_hat_upper4(*g.mollifier, psi * t)) * w * hb;
    };
    const double m0 = std::floor(static_cast<double>(R) / static_cast<double>(q)) + 1.0;
    double sum = term(m0);
    double m = m0;
    for (int it = 0; it < 400; ++it) {
      const double m_next = std::max(m + 1.0, m * 1.25);
      const double f_here = term(m);
      sum += f_here * (m_next - m);
      if (f_here * m < 1e-22) break;
      m = m_next;
    }
    total += sum;
  }
  return total;
}

std::complex<double> SpectralAccumulator::at(std::int64_t s) const {
  if (std::llabs(s) > radius)
    throw std::out_of_range("accumulator table lookup beyond radius " + std::to_string(radius));
  return coeffs[static_cast<std::size_t>(s + radius)];
}

bool SpectralAccumulator::hermitian_within(double tol) const {
  for (std::int64_t s = 1; s <= radius; ++s) {
    const auto d = at(-s) - std::conj(at(s));
    if (std::abs(d) > tol) return false;
  }
  return true;
}

SpectralAccumulator unit_impulse(std::int64_t radius) {
  SpectralAccumulator acc;
  acc.k = 0;
  acc.radius = radius;
  acc.coeffs.assign(static_cast<std::size_t>(2 * radius + 1), {0.0, 0.0});
  acc.coeffs[static_cast<std::size_t>(radius)] = {1.0, 0.0};
  acc.trunc_err = 0.0;
  return acc;
}

SpectralAccumulator accumulate_factor(const FactorSpectrum& g, std::int64_t radius) {
  SpectralAccumulator acc;
  acc.k = 1;
  acc.radius = radius;
  acc.variant = g.variant == FactorVariant::slow ? "slow" : "fast";
  acc.coeffs.resize(static_cast<std::size_t>(2 * radius + 1));
  for (std::int64_t s = -radius; s <= radius; ++s)
    acc.coeffs[static_cast<std::size_t>(s + radius)] = g_hat(g, s);
  acc.trunc_err = 0.0;  // the table stores exact single-stage values
  acc.stage_diff_proxy = 0.0;
  acc.h_env = [g](double u) { return std::min(1.0, g_hat_upper_bound(g, u)); };
  auto env = std::make_shared<DivisorEnvelope>();
  env->mollifier = g.mollifier;
  const auto& primes = g.variant == FactorVariant::slow ? g.block.primes : g.rungs;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    DivisorEnvelope::Channel ch;
    ch.q = primes[i];
    ch.psi = g.variant == FactorVariant::slow ? g.psi_q[i] : g.psi_rung[i];
    ch.w = g.variant == FactorVariant::slow ? g.weight_q[i] : 1.0 / static_cast<double>(g.n_k);
    env->channels.push_back(ch);
  }
  acc.h_divisor_env = std::move(env);
  return acc;
}

namespace {

std::int64_t choose_radius(const SpectralAccumulator& acc, const FactorSpectrum& g,
                           std::int64_t S, double eps, std::int64_t radius_max, double* tail_out) {
  auto tail_at = [&](std::int64_t R) -> double {
    if (acc.k == 0) return 0.0;  // impulse: no tail at all
    if (acc.h_divisor_env) return convolution_tail_bound(g, *acc.h_divisor_env, R, S);
    const double cap = 2.0 + acc.trunc_err;
    auto env = acc.h_env;
    std::function<double(double)> hb =
        env ? std::function<double(double)>([env, cap](double u) { return std::min(cap, env(u)); })
            : std::function<double(double)>([cap](double) { return cap; });
    return convolution_tail_bound(g, hb, R, S);
  };
  std::int64_t R = std::max<std::int64_t>(4 * S, 16);
  double tail = tail_at(R);
  while (tail > eps && R < radius_max) {
    R = std::min(radius_max, 2 * R);
    tail = tail_at(R);
  }
  *tail_out = tail;
  return R;
}

}  // namespace

SpectralAccumulator convolve_stage(const SpectralAccumulator& acc, const FactorSpectrum& g,
                                   std::int64_t S, double eps, std::int64_t radius_max) {
  double tail = 0.0;
  const std::int64_t R = choose_radius(acc, g, S, eps, radius_max, &tail);
  if (acc.radius < S + R)
    throw std::runtime_error("convolve_stage: accumulator radius " + std::to_string(acc.radius) +
                             " is short; required radius S + R = " + std::to_string(S + R));

  const auto lattice = support_lattice(g, R);
  // g_hat per lattice point, evaluated once.
  std::vector<std::complex<double>> gv(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) gv[i] = g_hat(g, lattice[i]);

  double sum_abs_g = 0.0;
  for (const auto& v : gv) sum_abs_g += std::abs(v);

  SpectralAccumulator out;
  out.k = acc.k + 1;
  out.radius = S;
  out.variant = acc.variant;
  out.eps = eps;
  out.radius_G = R;
  out.coeffs.resize(static_cast<std::size_t>(2 * S + 1));
  for (std::int64_t s = -S; s <= S; ++s) {
    std::complex<double> v{0.0, 0.0};
    for (std::size_t i = 0; i < lattice.size(); ++i)
      v += acc.at(s - lattice[i]) * gv[i];
    out.coeffs[static_cast<std::size_t>(s + S)] = v;
  }

  out.trunc_err = acc.trunc_err * (1.0 + sum_abs_g) + tail;
  out.hypothesis_status =
      (acc.hypothesis_status == "exploratory" || tail > eps) ? "exploratory" : acc.hypothesis_status;
  if (tail > eps) out.eps_met = false;

  // Near-range difference proxy |mu_k - mu_{k-1}| over |s| < M_G/4: the
  // within-radius part uses the actual H values (the table reaches |t| + lim),
  // the beyond-radius part the tail bound.
  double diff_proxy = acc.trunc_err * sum_abs_g + tail;
  {
    const std::int64_t lim = std::min<std::int64_t>(std::max<std::int64_t>(
        g.first_scale() / 4 - 1, 1), S);
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      if (lattice[i] == 0) continue;
      double h_max = 0.0;
      for (std::int64_t s = -lim; s <= lim; ++s) {
        const std::int64_t u = s - lattice[i];
        if (std::llabs(u) <= acc.radius) h_max = std::max(h_max, std::abs(acc.at(u)));
      }
      diff_proxy += std::abs(gv[i]) * h_max;
    }
  }
  out.stage_diff_proxy = diff_proxy;

  // Coarse decreasing envelope for further stages.
  {
    auto prev_env = acc.h_env;
    const double prev_cap = 2.0 + acc.trunc_err;
    const double new_cap = 2.0 + out.trunc_err;
    const FactorSpectrum g_copy = g;
    const double l1 = sum_abs_g;
    out.h_env = [prev_env, prev_cap, new_cap, g_copy, l1](double u) {
      const double a = prev_env ? std::min(prev_cap, prev_env(u / 2.0)) * l1 : prev_cap * l1;
      const double b = std::min(1.0, g_hat_upper_bound(g_copy, u / 2.0)) * prev_cap;
      return std::min(new_cap, a + b);
    };
  }
  return out;
}

double significance_window(const FactorSpectrum& f, double cut) {
  // Smallest u (doubling ladder) beyond which the all-factor majorant of
  // |g_hat| stays below cut.
  auto bound = [&](double u) {
    double b = 0.0;
    const auto& primes = f.variant == FactorVariant::slow ? f.block.primes : f.rungs;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      const double psi = f.variant == FactorVariant::slow ? f.psi_q[i] : f.psi_rung[i];
      const double w = f.variant == FactorVariant::slow ? f.weight_q[i]
                                                        : 1.0 / static_cast<double>(f.n_k);
      b += phi_hat_upper_all(*f.mollifier, psi * u) * w;
    }
    return b;
  };
  double u = static_cast<double>(std::max<std::int64_t>(f.first_scale(), 2));
  while (u < 9.0e18 && bound(u) >= cut) u *= 2.0;
  return u;
}

std::complex<double> convolve_eval_at(
    const std::function<std::complex<double>(std::int64_t)>& H, const FactorSpectrum& g,
    std::int64_t s, double lattice_cut, double H_window) {
  // Lattice points of g that can contribute: |H(s - t)| is significant only
  // within the window, and g's own majorant cuts the rest.
  std::vector<std::int64_t> pts;
  pts.push_back(0);
  const auto& primes = g.variant == FactorVariant::slow ? g.block.primes : g.rungs;
  const double W = H_window;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const std::int64_t q = primes[i];
    const auto m_lo = static_cast<std::int64_t>(
        std::floor((static_cast<double>(s) - W) / static_cast<double>(q)));
    const auto m_hi = static_cast<std::int64_t>(
        std::ceil((static_cast<double>(s) + W) / static_cast<double>(q)));
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
      if (m == 0) continue;
      pts.push_back(m * q);
    }
  }
  std::sort(pts.begin(), pts.end(), LatticeOrder{});
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::complex<double> acc{0.0, 0.0};
  for (std::int64_t t : pts) {
    const auto gv = g_hat(g, t);
    if (t != 0 && std::abs(gv) < lattice_cut) continue;
    acc += H(s - t) * gv;
  }
  return acc;
}

std::complex<double> mu_hat_fast_eval(const std::vector<FactorSpectrum>& stages, std::int64_t s,
                                      double lattice_cut) {
  if (stages.empty()) throw std::invalid_argument("mu_hat_fast_eval: no stages");
  if (stages.size() == 1) return g_hat(stages.front(), s);
  std::vector<FactorSpectrum> head(stages.begin(), stages.end() - 1);
  double window = 0.0;
  for (const auto& f : head) window += significance_window(f, lattice_cut);
  return convolve_eval_at(
      [&](std::int64_t u) { return mu_hat_fast_eval(head, u, lattice_cut); }, stages.back(), s,
      lattice_cut, window);
}

}  // namespace muhat
