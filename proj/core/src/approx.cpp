#include "muhat/approx.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "muhat/sieve.hpp"

namespace muhat {

namespace {

constexpr double kE = 2.718281828459045235360287;

// Monotone bisection in log-x. f must be strictly monotone on [lo, hi].
double invert_monotone(const std::function<double(double)>& f, double target, double lo,
                       double hi, bool increasing) {
  double flo = f(lo), fhi = f(hi);
  auto below = [&](double fv) { return increasing ? fv < target : fv > target; };
  if (!below(flo) || below(fhi)) {
    // Expand once in each direction before giving up.
    for (int i = 0; i < 8 && !below(flo); ++i) { lo -= 64; flo = f(lo); }
    for (int i = 0; i < 8 && below(fhi); ++i) { hi += 64; fhi = f(hi); }
    if (!below(flo) || below(fhi))
      throw std::domain_error("inversion failure: target outside the representable range");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (below(f(mid))) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Strictly monotone piecewise-linear map in log-log coordinates.
struct LogLogTable {
  std::vector<double> lx, ly;  // ascending lx
  bool increasing = true;

  double eval(double x) const {
    if (x < lx.front() - 1e-12 || x > lx.back() + 1e-12)
      throw std::domain_error("table lookup outside tabulated range");
    x = std::clamp(x, lx.front(), lx.back());
    auto it = std::upper_bound(lx.begin(), lx.end(), x);
    std::size_t i = (it == lx.begin()) ? 1 : static_cast<std::size_t>(it - lx.begin());
    if (i >= lx.size()) i = lx.size() - 1;
    const double t = (x - lx[i - 1]) / (lx[i] - lx[i - 1]);
    return ly[i - 1] + t * (ly[i] - ly[i - 1]);
  }
  double eval_inverse(double y) const {
    const double ymin = increasing ? ly.front() : ly.back();
    const double ymax = increasing ? ly.back() : ly.front();
    if (y < ymin - 1e-12 || y > ymax + 1e-12)
      throw std::domain_error("table inversion outside tabulated range");
    y = std::clamp(y, ymin, ymax);
    // Find the segment containing y; ly is monotone.
    std::size_t i = 1;
    if (increasing) {
      while (i + 1 < ly.size() && ly[i] < y) ++i;
    } else {
      while (i + 1 < ly.size() && ly[i] > y) ++i;
    }
    const double t = (y - ly[i - 1]) / (ly[i] - ly[i - 1]);
    return lx[i - 1] + t * (lx[i] - lx[i - 1]);
  }
};

LogLogTable make_table(std::vector<std::pair<double, double>> pts, bool increasing,
                       const char* what) {
  if (pts.size() < 2) throw std::invalid_argument(std::string(what) + ": need >= 2 table points");
  std::sort(pts.begin(), pts.end());
  LogLogTable t;
  t.increasing = increasing;
  for (auto& [x, y] : pts) {
    if (x <= 0 || y <= 0)
      throw std::invalid_argument(std::string(what) + ": table points must be positive");
    t.lx.push_back(std::log(x));
    t.ly.push_back(std::log(y));
  }
  for (std::size_t i = 1; i < t.ly.size(); ++i) {
    const bool up = t.ly[i] > t.ly[i - 1];
    if (up != increasing)
      throw std::invalid_argument(std::string(what) + ": table is not strictly monotone");
  }
  return t;
}

}  // namespace

double ApproximationProfile::psi(double q) const {
  return std::exp(log_psi(std::log(q)));
}
double ApproximationProfile::psi_inverse(double t) const {
  return std::exp(log_psi_inv(std::log(t)));
}
double DimensionFunction::alpha(double x) const { return std::exp(log_alpha(std::log(x))); }
double DimensionFunction::alpha_inverse(double y) const {
  return std::exp(log_alpha_inv(std::log(y)));
}

ApproximationProfile make_power_profile(double tau) {
  if (!(tau > 0)) throw std::invalid_argument("power profile: tau must be positive");
  ApproximationProfile p;
  p.kind = "power";
  p.tau = tau;
  p.sigma = tau;
  p.log_psi = [tau](double lq) { return -tau * lq; };
  p.log_psi_inv = [tau](double lt) { return -lt / tau; };
  return p;
}

ApproximationProfile make_power_log_profile(double tau) {
  if (!(tau > 0)) throw std::invalid_argument("power_log profile: tau must be positive");
  ApproximationProfile p;
  p.kind = "power_log";
  p.tau = tau;
  // The log factor costs d(loglog)/d(log q) = 1/log q per octave; 0.25 keeps
  // the sigma condition valid from q ~ 56 up, below the default q_min = 100.
  p.sigma = tau - 0.25;
  auto lp = [tau](double lq) { return -tau * lq + std::log(std::log(kE + std::exp(lq))); };
  p.log_psi = lp;
  p.log_psi_inv = [lp](double lt) {
    return invert_monotone(lp, lt, -8.0, 120.0, /*increasing=*/false);
  };
  return p;
}

ApproximationProfile make_table_profile(std::vector<std::pair<double, double>> points,
                                        double tau, double sigma) {
  auto tbl = std::make_shared<LogLogTable>(make_table(std::move(points), false, "psi table"));
  ApproximationProfile p;
  p.kind = "table";
  p.tau = tau;
  p.sigma = sigma;
  p.log_psi = [tbl](double lq) { return tbl->eval(lq); };
  p.log_psi_inv = [tbl](double lt) { return tbl->eval_inverse(lt); };
  return p;
}

DivergenceWeight make_chi_one() {
  return DivergenceWeight{"one", [](double) { return 1.0; }};
}
DivergenceWeight make_chi_log() {
  return DivergenceWeight{"log", [](double q) { return std::max(1.0, std::log(q)); }};
}
DivergenceWeight make_chi_loglog() {
  return DivergenceWeight{"loglog",
                          [](double q) { return std::max(1.0, std::log(std::log(q + 16.0))); }};
}
DivergenceWeight make_chi_table(std::vector<std::pair<double, double>> points) {
  auto tbl = std::make_shared<LogLogTable>(make_table(std::move(points), true, "chi table"));
  return DivergenceWeight{"table", [tbl](double q) {
                            const double lq = std::log(q);
                            const double clamped = std::clamp(lq, tbl->lx.front(), tbl->lx.back());
                            return std::exp(tbl->eval(clamped));
                          }};
}

namespace {
GrowthGauge capped_gauge(std::string kind, std::function<double(double)> raw) {
  // omega <= log t is imposed globally (t clamped below at 2), resolving the
  // mismatch between "any omega -> infinity" and the stability hypothesis.
  return GrowthGauge{std::move(kind), [raw = std::move(raw)](double t) {
                       const double tc = std::max(t, 2.0);
                       return std::min(raw(tc), std::log(tc));
                     }};
}
}  // namespace

GrowthGauge make_omega_log() {
  return capped_gauge("log", [](double t) { return std::log(t); });
}
GrowthGauge make_omega_loglog() {
  return capped_gauge("loglog", [](double t) { return std::log(std::log(t + 16.0)); });
}
GrowthGauge make_omega_logloglog() {
  return capped_gauge("logloglog",
                      [](double t) { return std::log(std::log(std::log(t + 41.0))); });
}
GrowthGauge make_omega_table(std::vector<std::pair<double, double>> points) {
  auto tbl = std::make_shared<LogLogTable>(make_table(std::move(points), true, "omega table"));
  return capped_gauge("table", [tbl](double t) {
    const double lt = std::clamp(std::log(t), tbl->lx.front(), tbl->lx.back());
    return std::exp(tbl->eval(lt));
  });
}

DimensionFunction make_alpha_power(double nu) {
  if (!(nu > 0 && nu < 1))
    throw std::invalid_argument("alpha power preset: nu must lie in (0,1)");
  DimensionFunction a;
  a.kind = "power";
  a.nu = nu;
  a.rho = nu;
  a.log_alpha = [nu](double lx) { return nu * lx; };
  a.log_alpha_inv = [nu](double ly) { return ly / nu; };
  return a;
}

DimensionFunction make_alpha_power_log(double nu) {
  if (!(nu > 0 && nu < 1))
    throw std::invalid_argument("alpha power_log preset: nu must lie in (0,1)");
  DimensionFunction a;
  a.kind = "power_log";
  a.nu = nu;
  a.rho = 0.5 * (nu + 1.0);
  auto la = [nu](double lx) { return nu * lx - std::log1p(std::fabs(lx)); };
  a.log_alpha = la;
  a.log_alpha_inv = [la](double ly) {
    return invert_monotone(la, ly, -260.0, 0.0, /*increasing=*/true);
  };
  return a;
}

DimensionFunction make_alpha_table(std::vector<std::pair<double, double>> points) {
  auto tbl = std::make_shared<LogLogTable>(make_table(std::move(points), true, "alpha table"));
  DimensionFunction a;
  a.kind = "table";
  a.nu = 0.5;
  a.rho = 0.9;
  a.log_alpha = [tbl](double lx) { return tbl->eval(lx); };
  a.log_alpha_inv = [tbl](double ly) { return tbl->eval_inverse(ly); };
  return a;
}

double log_theta(const ApproximationProfile& profile, const DivergenceWeight& chi, double xi) {
  if (!(xi >= 1.0)) throw std::domain_error("theta: xi must be >= 1");
  const double lu = profile.log_psi_inv(-std::log(xi));  // log psi^{-1}(1/xi)
  const double u = std::exp(lu);
  return -lu - std::log(chi(u));
}

double theta_eval(const ApproximationProfile& profile, const DivergenceWeight& chi, double xi) {
  return std::exp(log_theta(profile, chi, xi));
}

double DecayEnvelope::log_value(double xi) const {
  double lv = log_theta(*profile, *chi, xi);
  if (omega) lv += std::log((*omega)(xi));
  return lv;
}
double DecayEnvelope::value(double xi) const { return std::exp(log_value(xi)); }

ApproximationProfile psi_from_alpha(const DimensionFunction& alpha) {
  ApproximationProfile p;
  p.kind = "from_alpha";
  p.tau = 2.0 / alpha.nu;
  p.sigma = 2.0 / alpha.rho;
  auto la_inv = alpha.log_alpha_inv;
  auto la = alpha.log_alpha;
  p.log_psi = [la_inv](double lq) { return la_inv(-2.0 * lq); };
  // alpha(psi(q)) = q^{-2}  =>  psi^{-1}(t) = alpha(t)^{-1/2}.
  p.log_psi_inv = [la](double lt) { return -0.5 * la(lt); };
  return p;
}

double DoublingMajorant::operator()(double xi) const {
  if (xi < 0 || xi > static_cast<double>(radius()))
    throw std::domain_error("doubling majorant is only claimed on [0, S]");
  return values[static_cast<std::size_t>(xi)];
}

DoublingMajorant doubling_majorant_abs(std::span<const double> m1_input) {
  if (m1_input.empty()) throw std::invalid_argument("doubling_majorant: empty table");
  const std::size_t n = m1_input.size();
  // M1(s) = sup_{|t| >= s} |m(t)| over the table.
  std::vector<double> M1(n);
  double running = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    running = std::max(running, m1_input[i]);
    M1[i] = running;
  }
  DoublingMajorant N;
  N.values.resize(n);
  double prefix = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    prefix += M1[s];
    double v = prefix / static_cast<double>(s + 1);
    // The average of a nonincreasing sequence dominates its last term and is
    // itself nonincreasing; the clamps only repair last-ulp rounding.
    v = std::max(v, M1[s]);
    if (s > 0) v = std::min(v, N.values[s - 1]);
    N.values[s] = v;
  }
  return N;
}

DoublingMajorant doubling_majorant(std::span<const std::complex<double>> table) {
  if (table.empty()) throw std::invalid_argument("doubling_majorant: empty table");
  if (table.size() % 2 == 0)
    throw std::invalid_argument("doubling_majorant: table must cover [-S, S] (odd size)");
  const std::int64_t S = static_cast<std::int64_t>(table.size() / 2);
  std::vector<double> folded(static_cast<std::size_t>(S) + 1);
  for (std::int64_t s = 0; s <= S; ++s)
    folded[static_cast<std::size_t>(s)] =
        std::max(std::abs(table[static_cast<std::size_t>(S + s)]),
                 std::abs(table[static_cast<std::size_t>(S - s)]));
  return doubling_majorant_abs(folded);
}

Report check_structural_conditions(const ApproximationProfile& profile,
                                   const DivergenceWeight& chi, const GrowthGauge& omega,
                                   const SampleSpec& spec) {
  Report rep;
  rep.check_id = "structural_conditions";
  rep.parameter_echo = {{"psi", profile.kind},     {"chi", chi.kind},
                        {"omega", omega.kind},     {"q_min", spec.q_min},
                        {"q_max", spec.q_max},     {"samples", spec.samples},
                        {"prime_sum_bound", spec.prime_sum_bound}};

  std::vector<double> qs;
  const double l0 = std::log(std::max(spec.q_min, 3.0));
  const double l1 = std::log(spec.q_max);
  for (int i = 0; i < spec.samples; ++i)
    qs.push_back(std::exp(l0 + (l1 - l0) * i / (spec.samples - 1)));

  // tau condition: 2 < tau < infinity assessed at the deep end of the range.
  {
    const double q = qs.back();
    const double tau_hat = -profile.log_psi(std::log(q)) / std::log(q);
    auto& e = rep.add("tau_condition", tau_hat > 2.0 + 1e-9 ? CheckStatus::pass
                                                            : CheckStatus::fail);
    e.values["tau_hat"] = tau_hat;
    e.values["margin"] = tau_hat - 2.0;
    e.values["tau_declared"] = profile.tau;
  }

  // sigma condition: psi(q1)/psi(q2) >= (q2/q1)^sigma, pairs above q_min.
  {
    double worst = 1e300;
    for (std::size_t i = 0; i < qs.size(); ++i)
      for (std::size_t j = i + 1; j < qs.size(); ++j) {
        const double lq1 = std::log(qs[i]), lq2 = std::log(qs[j]);
        const double margin =
            profile.log_psi(lq1) - profile.log_psi(lq2) - profile.sigma * (lq2 - lq1);
        worst = std::min(worst, margin);
      }
    auto& e = rep.add("sigma_condition", worst >= -1e-9 ? CheckStatus::pass : CheckStatus::fail);
    e.values["worst_log_margin"] = worst;
    e.values["sigma"] = profile.sigma;
  }

  // chi range: 1 <= chi(q) <= log q for q >= 3.
  {
    double lo_margin = 1e300, hi_margin = 1e300;
    for (double q : qs) {
      if (q < 3.0) continue;
      const double c = chi(q);
      lo_margin = std::min(lo_margin, c - 1.0);
      hi_margin = std::min(hi_margin, std::log(q) - c);
    }
    auto& e = rep.add("chi_range", (lo_margin >= -1e-12 && hi_margin >= -1e-12)
                                       ? CheckStatus::pass
                                       : CheckStatus::fail);
    e.values["min_chi_minus_1"] = lo_margin;
    e.values["min_logq_minus_chi"] = hi_margin;
  }

  // chi growth: chi(q2)/chi(q1) < (q2/q1)^eps for each configured eps.
  for (double eps : spec.epsilons) {
    double worst = 1e300;
    for (std::size_t i = 0; i < qs.size(); ++i)
      for (std::size_t j = i + 1; j < qs.size(); ++j) {
        const double margin = eps * (std::log(qs[j]) - std::log(qs[i])) -
                              (std::log(chi(qs[j])) - std::log(chi(qs[i])));
        worst = std::min(worst, margin);
      }
    auto& e = rep.add("chi_growth_eps_" + format_double(eps),
                      worst >= -1e-9 ? CheckStatus::pass : CheckStatus::fail);
    e.values["eps"] = eps;
    e.values["worst_log_margin"] = worst;
  }

  // Partial sums of 1/(q chi(q)) over primes: trend only, never asserted.
  {
    const std::int64_t bound = std::max<std::int64_t>(spec.prime_sum_bound, 1000);
    std::vector<std::int64_t> checkpoints;
    for (int i = 3; i >= 0; --i) {
      std::int64_t c = bound;
      for (int k = 0; k < i; ++k) c /= 8;
      if (c >= 10) checkpoints.push_back(c);
    }
    auto& e = rep.add("chi_prime_sum_trend", CheckStatus::recorded);
    double sum = 0.0;
    std::size_t next = 0;
    for_primes(2, bound, [&](std::int64_t p) {
      while (next < checkpoints.size() && p > checkpoints[next]) {
        e.values["partial_sum_at_" + std::to_string(checkpoints[next])] = sum;
        ++next;
      }
      sum += 1.0 / (static_cast<double>(p) * chi(static_cast<double>(p)));
      return true;
    });
    for (; next < checkpoints.size(); ++next)
      e.values["partial_sum_at_" + std::to_string(checkpoints[next])] = sum;
    e.note = "divergence of the prime sum is not decidable numerically";
  }

  // omega: nondecreasing, capped by log t, increasing to infinity in trend.
  {
    double worst_monotone = 1e300, worst_cap = 1e300;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const double t = std::max(qs[i], 2.0);
      worst_cap = std::min(worst_cap, std::log(t) - omega(t));
      if (i > 0) worst_monotone = std::min(worst_monotone, omega(qs[i]) - omega(qs[i - 1]));
    }
    auto& e = rep.add("omega_conditions", (worst_monotone >= -1e-12 && worst_cap >= -1e-12)
                                              ? CheckStatus::pass
                                              : CheckStatus::fail);
    e.values["min_increment"] = worst_monotone;
    e.values["min_logt_minus_omega"] = worst_cap;
    e.values["omega_growth"] = omega(qs.back()) - omega(qs.front());
  }

  return rep;
}

}  // namespace muhat
