#include "muhat/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "muhat/fft.hpp"

namespace muhat {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double u) {
  const double au = std::fabs(u);
  if (au < 1e-4) {
    const double u2 = u * u;
    return 1.0 - u2 / 6.0 + u2 * u2 / 120.0 - u2 * u2 * u2 / 5040.0;
  }
  return std::sin(u) / u;
}

// Smallest J such that the dropped factors multiply the product by
// 1 + O(tol): second-order bound sum_{j>J} (pi a_j s)^2 / 6 < tol.
int truncation_index(const InghamMollifier& m, double s) {
  const double scale = kPi * s * kPi * s / 6.0;
  int lo = 1, hi = m.j_max;
  if (scale * m.suffix_sq[1] < m.tol) return 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (scale * m.suffix_sq[static_cast<std::size_t>(mid)] < m.tol) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

std::complex<double> product_up_to(const InghamMollifier& m, double s, int J) {
  double mod = 1.0;
  double phase_len = 0.0;
  for (int j = 0; j < J; ++j) {
    const double a = m.lengths[static_cast<std::size_t>(j)];
    mod *= sinc(kPi * a * s);
    phase_len += a;
  }
  const double phase = kPi * s * phase_len;
  return {mod * std::cos(phase), mod * std::sin(phase)};
}

}  // namespace

InghamMollifier build_mollifier(double beta, int j_max, double tol, double beta_prime) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("build_mollifier: beta must lie in (0,1)");
  if (beta_prime == 0.0) beta_prime = 0.5 * (1.0 + beta);
  if (!(beta_prime > beta && beta_prime < 1.0))
    throw std::invalid_argument("build_mollifier: beta' must lie in (beta, 1)");
  if (j_max < 8)
    throw std::invalid_argument(
        "build_mollifier: j_max too small to meet tol (need at least 8 factors)");
  if (!(tol > 0.0 && tol <= 0.1))
    throw std::invalid_argument("build_mollifier: tol must lie in (0, 0.1]");

  InghamMollifier m;
  m.beta = beta;
  m.beta_prime = beta_prime;
  m.tol = tol;
  m.j_max = j_max;
  m.lengths.resize(static_cast<std::size_t>(j_max));
  const double p = 1.0 / beta_prime;
  double sum = 0.0;
  for (int j = 1; j <= j_max; ++j) {
    const double a = std::pow(static_cast<double>(j), -p);
    m.lengths[static_cast<std::size_t>(j - 1)] = a;
    sum += a;
  }
  const double c0 = 0.5 / sum;
  for (double& a : m.lengths) a *= c0;

  m.suffix_sq.assign(static_cast<std::size_t>(j_max) + 1, 0.0);
  for (int j = j_max; j >= 1; --j)
    m.suffix_sq[static_cast<std::size_t>(j - 1)] =
        m.suffix_sq[static_cast<std::size_t>(j)] +
        m.lengths[static_cast<std::size_t>(j - 1)] * m.lengths[static_cast<std::size_t>(j - 1)];
  return m;
}

std::complex<double> phi_hat(const InghamMollifier& m, double s) {
  if (s == 0.0) return {1.0, 0.0};
  return product_up_to(m, s, truncation_index(m, s));
}

std::complex<double> phi_hat_full(const InghamMollifier& m, double s) {
  if (s == 0.0) return {1.0, 0.0};
  return product_up_to(m, s, m.j_max);
}

double phi_hat_tail_bound(const InghamMollifier& m, double s) {
  if (s == 0.0) return 0.0;
  const int J = truncation_index(m, s);
  return kPi * s * kPi * s / 6.0 * m.suffix_sq[static_cast<std::size_t>(J)];
}

double log_abs_phi_hat(const InghamMollifier& m, double s) {
  if (s == 0.0) return 0.0;
  double acc = 0.0;
  for (double a : m.lengths) {
    const double v = std::fabs(sinc(kPi * a * s));
    if (v == 0.0) return -std::numeric_limits<double>::infinity();
    acc += std::log(v);
  }
  return acc;
}

double phi_hat_upper4(const InghamMollifier& m, double v) {
  const double av = std::fabs(v);
  double bound = 1.0;
  const int J = std::min(m.j_max, 4);
  for (int j = 0; j < J; ++j)
    bound *= std::min(1.0, 1.0 / (kPi * m.lengths[static_cast<std::size_t>(j)] * av));
  return bound;
}

double phi_hat_upper_all(const InghamMollifier& m, double v) {
  const double av = std::fabs(v);
  double log_bound = 0.0;
  for (double a : m.lengths) {
    const double u = kPi * a * av;
    if (u > 1.0) log_bound -= std::log(u);
    if (log_bound < -745.0) return 0.0;
  }
  return std::exp(log_bound);
}

std::vector<double> phi_grid(const InghamMollifier& m, int log2_n) {
  if (log2_n < 10 || log2_n > 24)
    throw std::invalid_argument("phi_grid: need 2^10 <= n <= 2^24");
  const std::int64_t n = std::int64_t(1) << log2_n;
  std::vector<std::complex<double>> c(static_cast<std::size_t>(n), {0.0, 0.0});
  // c[k] = phi_hat(s) * (-1)^s shifts the origin to x = -1/2; the +n/2 and
  // -n/2 terms alias onto the same bin at the sample points.
  for (std::int64_t s = -n / 2; s < n / 2; ++s) {
    const std::size_t k = static_cast<std::size_t>((s + n) % n);
    const double sign = (s & 1) ? -1.0 : 1.0;
    c[k] += phi_hat(m, static_cast<double>(s)) * sign;
  }
  {
    const std::size_t k = static_cast<std::size_t>(n / 2);
    const double sign = ((n / 2) & 1) ? -1.0 : 1.0;
    c[k] += phi_hat(m, static_cast<double>(n / 2)) * sign;
  }
  auto x = fft_inverse(c);
  std::vector<double> out(static_cast<std::size_t>(n));
  double worst_imag = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    worst_imag = std::max(worst_imag, std::fabs(x[i].imag()));
    out[i] = x[i].real();
  }
  if (worst_imag > 1e-10)
    throw std::runtime_error("phi_grid: imaginary residue " + format_double(worst_imag) +
                             " exceeds 1e-10");
  return out;
}

Report check_mollifier_decay(const InghamMollifier& m, double beta_target, double s_max) {
  if (!(s_max >= 100.0)) throw std::invalid_argument("check_mollifier_decay: s_max >= 100");
  Report rep;
  rep.check_id = "mollifier_decay";
  rep.parameter_echo = {{"beta", m.beta},
                        {"beta_prime", m.beta_prime},
                        {"j_max", m.j_max},
                        {"beta_target", beta_target},
                        {"s_max", s_max}};

  const int bases = 48;
  std::vector<double> ls, lL;
  double c_worst = 1e300;
  const double l0 = std::log(8.0), l1 = std::log(s_max);
  for (int i = 0; i < bases; ++i) {
    const double s = std::exp(l0 + (l1 - l0) * i / (bases - 1));
    // Local sup over a short jitter window dodges individual sinc zeros.
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 8; ++k)
      best = std::max(best, log_abs_phi_hat(m, s * (1.0 + k / 64.0)));
    if (!std::isfinite(best) || best >= 0.0) continue;
    const double L = -best;  // -log|phi_hat| at the local envelope
    ls.push_back(std::log(s));
    lL.push_back(std::log(L));
    c_worst = std::min(c_worst, L / std::pow(s, beta_target));
  }

  // slope of log(-log|phi_hat|) vs log s: informational. A finite product
  // is sub-exponential only up to ~1/a_{j_max}, polynomial of order j_max
  // beyond, so the gate is the worst coefficient staying above a floor.
  double slope = 0.0;
  if (ls.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ls.size(); ++i) {
      sx += ls[i]; sy += lL[i]; sxx += ls[i] * ls[i]; sxy += ls[i] * lL[i];
    }
    const double nn = static_cast<double>(ls.size());
    slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  }

  constexpr double kCoefficientFloor = 0.05;
  const bool ok = c_worst >= kCoefficientFloor;
  auto& e = rep.add("decay_fit", ok ? CheckStatus::pass : CheckStatus::fail);
  e.values["realized_exponent"] = slope;
  e.values["target_exponent"] = beta_target;
  e.values["fitted_c_worst"] = c_worst;
  e.values["coefficient_floor"] = kCoefficientFloor;
  e.values["samples_used"] = static_cast<double>(ls.size());
  if (!ok) e.note = "decay does not reach exp(-c |s|^beta) on the sampled range";
  return rep;
}

}  // namespace muhat
