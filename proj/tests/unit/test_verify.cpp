#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "muhat/verify.hpp"

using namespace muhat;

namespace {

struct Fixture {
  ApproximationProfile psi = make_power_profile(3.0);
  DivergenceWeight chi = make_chi_one();
  GrowthGauge omega = make_omega_loglog();
  std::shared_ptr<InghamMollifier> moll =
      std::make_shared<InghamMollifier>(build_mollifier(2.0 / 3.0, 64, 1e-12));
  DecayEnvelope env() { return {&psi, &chi, &omega}; }
};

const CheckEntry* entry(const Report& r, const std::string& name) {
  for (const auto& e : r.entries)
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace

TEST_CASE("single factor: desk block constants and vanishing") {
  Fixture fx;
  auto f = make_factor_slow(select_block(11, fx.chi), fx.psi, fx.chi, fx.moll, 1);
  auto env = fx.env();
  auto rep = check_single_factor(f, 1 << 17, env);
  CHECK_FALSE(rep.any_failed());
  const auto* c1 = entry(rep, "theta_envelope_C1");
  REQUIRE(c1 != nullptr);
  CHECK(c1->status == CheckStatus::pass);
  CHECK(c1->values.at("C1") > 0.5);
  CHECK(c1->values.at("C1") < 10.0);
  CHECK(c1->values.at("drift") < 0.05);
}

TEST_CASE("single factor: fast ladder uniform bound") {
  Fixture fx;
  RajchmanStage st{2, {11, 10651}};
  auto f = make_factor_fast(st, fx.psi, fx.moll, 1);
  auto env = fx.env();
  auto rep = check_single_factor(f, 1 << 17, env);
  CHECK_FALSE(rep.any_failed());
  const auto* e = entry(rep, "fast_uniform_bound");
  REQUIRE(e != nullptr);
  CHECK(e->values.at("max_abs_times_nk") == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("stability: impulse partner gives machine-zero equality") {
  Fixture fx;
  auto f = make_factor_slow(select_block_capped(11, 97, fx.chi), fx.psi, fx.chi, fx.moll, 1);
  const std::int64_t S = 256;
  auto impulse = unit_impulse(5 * S);
  auto HG = convolve_stage(impulse, f, S, 1e-9, 4 * S);
  auto H = accumulate_factor(f, S);
  StabilityInput in;
  in.H = &H;
  in.G = nullptr;
  in.N1 = 1;
  in.N2 = 4.0 * static_cast<double>(S);
  in.N3 = 1;
  in.sigma = 3.0;
  auto env = fx.env();
  auto rep = check_stability(in, HG, env, false);
  const auto* near = entry(rep, "near_range_difference");
  REQUIRE(near != nullptr);
  CHECK(near->status == CheckStatus::pass);
  CHECK(near->values.at("max_abs_difference") == 0.0);
}

TEST_CASE("stability lemma 1 on a small exploratory pair") {
  Fixture fx;
  auto f1 = make_factor_slow(select_block_capped(11, 19, fx.chi), fx.psi, fx.chi, fx.moll, 1);
  auto f2 = make_factor_slow(select_block_capped(101, 199, fx.chi), fx.psi, fx.chi, fx.moll, 2);
  const std::int64_t S = 100;
  auto acc1 = accumulate_factor(f1, S + 4096);
  auto acc2 = convolve_stage(acc1, f2, S, 1e-8, 4096);
  StabilityInput in;
  in.H = &acc1;
  in.G = &f2;
  in.N1 = std::pow(19.0, 6.0);
  in.N2 = 101.0;
  in.N3 = std::pow(199.0, 6.0);
  in.sigma = 3.0;
  auto env = fx.env();
  auto rep = check_stability(in, acc2, env, false);
  const auto* near = entry(rep, "near_range_difference");
  REQUIRE(near != nullptr);
  // The mechanism: the observed difference is dominated by the tail proxy.
  CHECK(near->values.at("max_abs_difference") <= near->values.at("tail_proxy"));
  CHECK(near->status != CheckStatus::fail);
}

TEST_CASE("stability lemma 2 on a synthetic delta-bounded partner") {
  Fixture fx;
  // H: synthetic exponential-tail table, |H| <= 2, N1 = 2.
  const std::int64_t S = 700;
  const double N1 = 2.0;
  SpectralAccumulator H;
  H.k = 1;
  H.radius = S + 600;
  H.variant = "fast";
  H.coeffs.resize(static_cast<std::size_t>(2 * H.radius + 1));
  for (std::int64_t s = -H.radius; s <= H.radius; ++s) {
    const double v = 2.0 * std::exp(-0.5 * std::pow(std::fabs(static_cast<double>(s)) /
                                                        (8.0 * N1),
                                                    0.75));
    H.coeffs[static_cast<std::size_t>(s + H.radius)] = {v, 0.0};
  }
  // G: a one-rung ladder with n = 8, so |G| <= 1/8 = delta off zero.
  RajchmanStage st{8, {67}};
  auto G = make_factor_fast(st, fx.psi, fx.moll, 2);
  const double delta = 1.0 / 8.0;

  // Dense direct convolution as the oracle for H * G.
  SpectralAccumulator HG;
  HG.k = 2;
  HG.radius = S;
  HG.variant = "fast";
  HG.radius_G = 600;
  HG.coeffs.resize(static_cast<std::size_t>(2 * S + 1));
  for (std::int64_t s = -S; s <= S; ++s) {
    std::complex<double> acc{0.0, 0.0};
    for (std::int64_t t = -600; t <= 600; ++t) {
      const auto g = g_hat(G, t);
      if (g == std::complex<double>{0.0, 0.0}) continue;
      acc += H.at(s - t) * g;
    }
    HG.coeffs[static_cast<std::size_t>(s + S)] = acc;
  }

  StabilityInput in;
  in.H = &H;
  in.G = &G;
  in.N1 = N1;
  in.N2 = 67.0;
  in.N3 = 100.0;
  in.sigma = 3.0;
  in.lemma2 = true;
  in.delta = delta;
  auto env = fx.env();
  auto rep = check_stability(in, HG, env, false);
  CHECK_FALSE(rep.any_failed());
  const auto* mid = entry(rep, "mid_range_delta_half");
  REQUIRE(mid != nullptr);
  // |H*G| <= fitted * delta^{1/2} on the mid range with a modest constant.
  CHECK(mid->values.at("constant_vs_sqrt_delta") < 4.0);
  CHECK(mid->values.at("max_abs") <= 4.0 * std::sqrt(delta));
}

TEST_CASE("mu estimates: mass bound and k=1 reduction") {
  Fixture fx;
  auto f = make_factor_slow(select_block(11, fx.chi), fx.psi, fx.chi, fx.moll, 1);
  auto acc = accumulate_factor(f, 1 << 16);
  auto env = fx.env();
  auto rep = check_mu_estimates(acc, env, 1 << 16, 64 * 11 * 11 * 11);
  CHECK_FALSE(rep.any_failed());
  const auto* mass = entry(rep, "mass_bound");
  REQUIRE(mass != nullptr);
  CHECK(mass->values.at("abs_mu_hat_0") == 1.0);
  const auto* c = entry(rep, "envelope_constant");
  REQUIRE(c != nullptr);
  // k = 1 reduces to the single-factor sweep.
  auto single = check_single_factor(f, 1 << 16, env);
  const auto* c1 = entry(single, "theta_envelope_C1");
  const double omega_min = fx.omega(1.0);
  CHECK(c->values.at("fitted_constant") <= c1->values.at("C1") / omega_min * 1.0001);
}

TEST_CASE("cauchy: identical accumulators differ by zero") {
  Fixture fx;
  auto f = make_factor_slow(select_block_capped(11, 97, fx.chi), fx.psi, fx.chi, fx.moll, 1);
  auto acc = accumulate_factor(f, 256);
  auto rep = check_cauchy({&acc, &acc}, {11, 11}, {0.0, 0.0});
  CHECK_FALSE(rep.any_failed());
  CHECK(entry(rep, "pair_1_2")->values.at("max_abs_difference") == 0.0);
}

TEST_CASE("cauchy: nested pair dominated by the stage proxy") {
  Fixture fx;
  auto f1 = make_factor_slow(select_block_capped(11, 19, fx.chi), fx.psi, fx.chi, fx.moll, 1);
  auto f2 = make_factor_slow(select_block_capped(101, 199, fx.chi), fx.psi, fx.chi, fx.moll, 2);
  auto acc1 = accumulate_factor(f1, 100 + 4096);
  auto acc2 = convolve_stage(acc1, f2, 100, 1e-8, 4096);
  auto rep = check_cauchy({&acc1, &acc2}, {11, 101}, {0.0, acc2.stage_diff_proxy});
  CHECK_FALSE(rep.any_failed());
}

TEST_CASE("kahane extension on a grid-resolvable stage") {
  Fixture fx;
  auto f = make_factor_slow(select_block_capped(11, 19, fx.chi), fx.psi, fx.chi, fx.moll, 1);
  auto acc = accumulate_factor(f, 4096);
  auto env = fx.env();
  auto samples = g_grid(f, 20);
  double c_int = 0.0;
  for (std::int64_t s = 1; s <= 4096; ++s) {
    const double a = std::abs(acc.at(s));
    if (a > 0)
      c_int = std::max(c_int, std::exp(std::log(a) - env.log_value(static_cast<double>(s))));
  }
  std::vector<double> xis = {1.5, 7.25, 22.5, 141.41421356, 977.1, 3003.5};
  auto rep = kahane_extension(
      samples, [&](std::int64_t s) { return acc.at(s); }, env, xis, c_int);
  CHECK_FALSE(rep.any_failed());
  const auto* e = entry(rep, "real_frequency_envelope");
  REQUIRE(e != nullptr);
  CHECK(e->values.at("real_constant") <= 8.0 * c_int);
}
