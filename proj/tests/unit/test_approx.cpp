#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "muhat/approx.hpp"

using namespace muhat;

TEST_CASE("theta: closed-form power inversion") {
  auto psi = make_power_profile(3.0);
  auto chi = make_chi_one();
  // psi^{-1}(1/1000) = 10, theta = 1/10... with chi = 1: 1000^{-1/3}.
  CHECK(theta_eval(psi, chi, 1000.0) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(theta_eval(psi, chi, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("theta: loglog weight evaluated by hand") {
  auto psi = make_power_profile(3.0);
  auto chi = make_chi_loglog();
  // psi^{-1}(1e-6) = 100; chi(100) = log log 116; checked by direct arithmetic.
  const double expected = 1.0 / (100.0 * std::log(std::log(116.0)));
  CHECK(theta_eval(psi, chi, 1e6) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("theta: domain error outside a tabulated profile") {
  auto psi = make_table_profile({{2, 0.25}, {10, 1e-3}, {100, 1e-6}}, 3.0, 2.0);
  auto chi = make_chi_one();
  CHECK_NOTHROW(theta_eval(psi, chi, 5000.0));
  CHECK_THROWS_AS(theta_eval(psi, chi, 1e12), std::domain_error);
}

TEST_CASE("theta doubling: exact ratio for pure powers") {
  auto psi = make_power_profile(3.0);
  auto chi = make_chi_one();
  const double expect = std::pow(2.0, 1.0 / 3.0);
  for (double xi : {16.0, 1000.0, 8.5e7, 1.0e12}) {
    const double ratio = theta_eval(psi, chi, xi / 2.0) / theta_eval(psi, chi, xi);
    CHECK(ratio == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("psi_from_alpha: power laws are algebraic") {
  auto a = make_alpha_power(2.0 / 3.0);
  auto psi = psi_from_alpha(a);
  CHECK(psi.tau == doctest::Approx(3.0));
  for (double q : {2.0, 7.0, 101.0}) {
    CHECK(psi.psi(q) == doctest::Approx(std::pow(q, -3.0)).epsilon(1e-12));
  }
  auto a2 = make_alpha_power(0.5);
  auto psi2 = psi_from_alpha(a2);
  CHECK(psi2.psi(3.0) == doctest::Approx(std::pow(3.0, -4.0)).epsilon(1e-12));
}

TEST_CASE("psi_from_alpha: numeric inversion verified by re-substitution") {
  auto a = make_alpha_power_log(2.0 / 3.0);
  auto psi = psi_from_alpha(a);
  for (double q : {3.0, 11.0, 101.0, 9973.0}) {
    const double resubstituted = a.alpha(psi.psi(q)) * q * q;
    CHECK(resubstituted == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("growth gauge presets are nondecreasing and capped by log t") {
  for (const auto& w : {make_omega_log(), make_omega_loglog(), make_omega_logloglog()}) {
    double prev = 0.0;
    for (double t = 2.0; t < 1e9; t *= 3.7) {
      const double v = w(t);
      CHECK(v >= prev);
      CHECK(v <= std::log(std::max(t, 2.0)) + 1e-12);
      CHECK(v > 0.0);
      prev = v;
    }
  }
}

TEST_CASE("structural conditions: power law passes everything") {
  auto rep = check_structural_conditions(make_power_profile(3.0), make_chi_one(),
                                         make_omega_loglog(), SampleSpec{});
  CHECK_FALSE(rep.any_failed());
}

TEST_CASE("structural conditions: tau = 2 fails the boundary") {
  auto rep = check_structural_conditions(make_power_profile(2.0), make_chi_one(),
                                         make_omega_loglog(), SampleSpec{});
  bool tau_failed = false;
  for (const auto& e : rep.entries)
    if (e.name == "tau_condition") tau_failed = e.status == CheckStatus::fail;
  CHECK(tau_failed);
}

TEST_CASE("structural conditions: q^-3 log q margins") {
  auto rep = check_structural_conditions(make_power_log_profile(3.0), make_chi_one(),
                                         make_omega_loglog(), SampleSpec{});
  for (const auto& e : rep.entries) {
    if (e.name == "tau_condition") CHECK(e.status == CheckStatus::pass);
    if (e.name == "sigma_condition") CHECK(e.status == CheckStatus::pass);
  }
}

TEST_CASE("structural conditions: prime sum is a recorded trend, never asserted") {
  SampleSpec spec;
  spec.prime_sum_bound = 100000;
  auto rep = check_structural_conditions(make_power_profile(3.0), make_chi_loglog(),
                                         make_omega_loglog(), spec);
  const CheckEntry* sum_entry = nullptr;
  for (const auto& e : rep.entries)
    if (e.name == "chi_prime_sum_trend") sum_entry = &e;
  REQUIRE(sum_entry != nullptr);
  CHECK(sum_entry->status == CheckStatus::recorded);
  // Partial sums increase along the numerically ordered checkpoints.
  std::vector<std::pair<long long, double>> pts;
  for (const auto& [k, v] : sum_entry->values)
    pts.emplace_back(std::stoll(k.substr(k.rfind('_') + 1)), v);
  std::sort(pts.begin(), pts.end());
  REQUIRE(pts.size() >= 3);
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].second >= pts[i - 1].second);
}

namespace {
// Independent double-loop evaluation of the majorant definition.
std::vector<double> majorant_oracle(const std::vector<std::complex<double>>& table) {
  const auto S = static_cast<std::int64_t>(table.size() / 2);
  std::vector<double> M1(static_cast<std::size_t>(S) + 1, 0.0);
  for (std::int64_t s = 0; s <= S; ++s)
    for (std::int64_t t = -S; t <= S; ++t)
      if (std::llabs(t) >= s)
        M1[static_cast<std::size_t>(s)] =
            std::max(M1[static_cast<std::size_t>(s)],
                     std::abs(table[static_cast<std::size_t>(t + S)]));
  std::vector<double> N(static_cast<std::size_t>(S) + 1);
  for (std::int64_t s = 0; s <= S; ++s) {
    double sum = 0.0;
    for (std::int64_t t = 0; t <= s; ++t) sum += M1[static_cast<std::size_t>(t)];
    N[static_cast<std::size_t>(s)] = sum / static_cast<double>(s + 1);
  }
  return N;
}
}  // namespace

TEST_CASE("doubling majorant: trivial fixtures") {
  // Constant table: the average of a constant.
  {
    std::vector<std::complex<double>> m(41, {0.37, 0.0});
    auto N = doubling_majorant(m);
    for (std::int64_t s = 0; s <= 20; ++s) CHECK(N(static_cast<double>(s)) == 0.37);
  }
  // Indicator of {0}: N(xi) = 1/(floor(xi)+1).
  {
    std::vector<std::complex<double>> m(41, {0.0, 0.0});
    m[20] = {1.0, 0.0};
    auto N = doubling_majorant(m);
    for (double xi : {0.0, 1.0, 2.5, 7.0, 20.0})
      CHECK(N(xi) == doctest::Approx(1.0 / (std::floor(xi) + 1.0)).epsilon(1e-15));
  }
}

TEST_CASE("doubling majorant: random tables vs the double-loop oracle") {
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const std::int64_t S = 3 + static_cast<std::int64_t>(rng() % 40);
    std::vector<std::complex<double>> m(static_cast<std::size_t>(2 * S + 1));
    for (auto& v : m) v = {U(rng) * 2.0 - 1.0, U(rng) * 2.0 - 1.0};
    auto N = doubling_majorant(m);
    auto oracle = majorant_oracle(m);
    for (std::int64_t s = 0; s <= S; ++s) {
      CHECK(N.values[static_cast<std::size_t>(s)] ==
            doctest::Approx(oracle[static_cast<std::size_t>(s)]).epsilon(1e-12));
      // Majorization is exact.
      CHECK(std::abs(m[static_cast<std::size_t>(s + S)]) <=
            N(static_cast<double>(s)));
      CHECK(std::abs(m[static_cast<std::size_t>(S - s)]) <=
            N(static_cast<double>(s)));
    }
    // The proof constant: N(s/2) <= 8 N(s) for integer 2 <= s <= S.
    for (std::int64_t s = 2; s <= S; ++s)
      CHECK(N(static_cast<double>(s) / 2.0) <= 8.0 * N(static_cast<double>(s)));
  }
}

TEST_CASE("doubling majorant: empty table refused") {
  CHECK_THROWS(doubling_majorant(std::span<const std::complex<double>>{}));
}
