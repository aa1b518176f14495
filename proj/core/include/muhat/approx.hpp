#pragma once

// Approximation function psi, the weights chi and omega, the dimension
// function alpha, the decay envelope theta, and the doubling machinery.
// All envelope arithmetic runs in the log domain; exp() is applied only at
// the interface.

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "muhat/report.hpp"

namespace muhat {

// psi: R+ -> R+, nonincreasing. Stored as log psi as a function of log q so
// ratio conditions never underflow. tau is the log-rate, sigma the
// polynomial-decay exponent of eq. (taudef)/(sigmadef).
struct ApproximationProfile {
  std::string kind;  // "power" | "power_log" | "table" | "from_alpha"
  double tau = 0.0;
  double sigma = 0.0;
  std::function<double(double)> log_psi;      // log q -> log psi(q)
  std::function<double(double)> log_psi_inv;  // log t -> log psi^{-1}(t)

  double psi(double q) const;
  double psi_inverse(double t) const;
};

// chi: weight on denominators, 1 <= chi(q) <= log q for q >= 3.
struct DivergenceWeight {
  std::string kind;  // "one" | "log" | "loglog" | "table"
  std::function<double(double)> value;  // q -> chi(q)
  double operator()(double q) const { return value(q); }
};

// omega: slowly increasing gauge. Presets are capped at log t globally
// (t clamped below at 2), so the Lemma 3.1 hypothesis omega(t) <= log t
// holds for every preset.
struct GrowthGauge {
  std::string kind;  // "log" | "loglog" | "logloglog" | "table"
  std::function<double(double)> value;
  double operator()(double t) const { return value(t); }
};

// alpha: dimension function, increasing with alpha(x) -> 0 as x -> 0.
struct DimensionFunction {
  std::string kind;  // "power" | "power_log" | "table"
  double nu = 0.0;   // log-rate at zero
  double rho = 0.0;  // growth exponent, < 1
  std::function<double(double)> log_alpha;      // log x -> log alpha(x)
  std::function<double(double)> log_alpha_inv;  // log y -> log alpha^{-1}(y)

  double alpha(double x) const;
  double alpha_inverse(double y) const;
};

// Presets. Tables are interpreted with log-linear interpolation and must be
// strictly monotone in the relevant direction.
ApproximationProfile make_power_profile(double tau);
ApproximationProfile make_power_log_profile(double tau);  // q^-tau * log(e+q)
ApproximationProfile make_table_profile(std::vector<std::pair<double, double>> points,
                                        double tau, double sigma);

DivergenceWeight make_chi_one();
DivergenceWeight make_chi_log();
DivergenceWeight make_chi_loglog();  // max(1, log log(q+16))
DivergenceWeight make_chi_table(std::vector<std::pair<double, double>> points);

GrowthGauge make_omega_log();
GrowthGauge make_omega_loglog();     // log log(t+16), capped at log t
GrowthGauge make_omega_logloglog();  // log log log(t+41), capped at log t
GrowthGauge make_omega_table(std::vector<std::pair<double, double>> points);

DimensionFunction make_alpha_power(double nu);
DimensionFunction make_alpha_power_log(double nu);  // x^nu / (1 + |log x|)
DimensionFunction make_alpha_table(std::vector<std::pair<double, double>> points);

// theta(xi) = 1 / (psi^{-1}(1/xi) * chi(psi^{-1}(1/xi))), xi >= 1.
double theta_eval(const ApproximationProfile& profile, const DivergenceWeight& chi,
                  double xi);
double log_theta(const ApproximationProfile& profile, const DivergenceWeight& chi,
                 double xi);

// The envelope theta(|s|)*omega(|s|) used by the mu_k estimates.
struct DecayEnvelope {
  const ApproximationProfile* profile = nullptr;
  const DivergenceWeight* chi = nullptr;
  const GrowthGauge* omega = nullptr;  // optional multiplier

  double log_value(double xi) const;
  double value(double xi) const;
};

// psi(q) = alpha^{-1}(q^{-2}); tau = 2/nu, sigma = 2/rho.
// psi^{-1}(t) = alpha(t)^{-1/2} in closed form.
ApproximationProfile psi_from_alpha(const DimensionFunction& alpha);

// Decreasing doubling majorant of a finite coefficient table m over [-S, S]
// (Lemma on the doubling majorant). M1(s) = sup_{|t| >= s} |m(t)| over the
// table; N(xi) = average of M1(0..floor(xi)). Claimed only on [0, S].
struct DoublingMajorant {
  std::vector<double> values;  // N at integer arguments 0..S
  double operator()(double xi) const;  // throws outside [0, S]
  std::int64_t radius() const { return static_cast<std::int64_t>(values.size()) - 1; }
};

DoublingMajorant doubling_majorant(std::span<const std::complex<double>> table_centered);
DoublingMajorant doubling_majorant_abs(std::span<const double> abs_nonneg_side);

// Sampling plan for the structural-condition report.
struct SampleSpec {
  double q_min = 100.0;   // conditions are asymptotic; not asserted below this
  double q_max = 1e6;
  int samples = 64;                            // log-spaced
  std::vector<double> epsilons = {0.5, 0.25};  // for the chi growth condition
  std::int64_t prime_sum_bound = 1'000'000;    // partial-sum bound for chicondition
};

// Per-condition sampled margins; failures are report entries, never errors.
// The prime sum of 1/(q chi(q)) is reported as a partial-sum trend only.
Report check_structural_conditions(const ApproximationProfile& profile,
                                   const DivergenceWeight& chi,
                                   const GrowthGauge& omega,
                                   const SampleSpec& spec);

}  // namespace muhat
