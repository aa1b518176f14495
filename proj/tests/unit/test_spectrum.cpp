#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <random>

#include "muhat/spectrum.hpp"

using namespace muhat;

namespace {

struct Fixture {
  ApproximationProfile psi = make_power_profile(3.0);
  DivergenceWeight chi = make_chi_one();
  GrowthGauge omega = make_omega_loglog();
  std::shared_ptr<InghamMollifier> moll =
      std::make_shared<InghamMollifier>(build_mollifier(2.0 / 3.0, 64, 1e-12));

  FactorSpectrum desk_factor() {
    return make_factor_slow(select_block(11, chi), psi, chi, moll, 1);
  }
  FactorSpectrum capped_factor(std::int64_t M, std::int64_t cap, int stage) {
    return make_factor_slow(select_block_capped(M, cap, chi), psi, chi, moll, stage);
  }
  DecayEnvelope env() { return {&psi, &chi, &omega}; }
};

}  // namespace

TEST_CASE("g_hat: exact values at and below the block scale") {
  Fixture fx;
  auto f = fx.desk_factor();
  CHECK(g_hat(f, 0) == std::complex<double>{1.0, 0.0});
  for (std::int64_t s = 1; s < 11; ++s) {
    CHECK(g_hat(f, s) == std::complex<double>{0.0, 0.0});
    CHECK(g_hat(f, -s) == std::complex<double>{0.0, 0.0});
  }
  // 7^5 = 16807 has no prime divisor in the block.
  CHECK(g_hat(f, 16807) == std::complex<double>{0.0, 0.0});
}

TEST_CASE("g_hat: single-divisor value against the closed formula") {
  Fixture fx;
  auto f = fx.desk_factor();
  // s = 22 is divisible only by 11 within the block.
  const auto expected =
      phi_hat(*fx.moll, 22.0 * std::pow(11.0, -3.0)) / (11.0 * f.C);
  CHECK(std::abs(g_hat(f, 22) - expected) < 1e-15);
}

TEST_CASE("g_hat: weights sum to one and Hermitian symmetry holds") {
  Fixture fx;
  auto f = fx.desk_factor();
  double wsum = 0.0;
  for (double w : f.weight_q) wsum += w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const auto s = static_cast<std::int64_t>(rng() % 100000) + 1;
    const auto d = g_hat(f, -s) - std::conj(g_hat(f, s));
    CHECK(std::abs(d) < 1e-14);
  }
}

TEST_CASE("grid oracle: spatial synthesis transforms back to the divisor formula") {
  Fixture fx;
  auto f = fx.capped_factor(11, 19, 1);
  auto oracle = mu_grid_oracle({f}, 1, 20);
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int i = 0; i < 400; ++i) {
    const auto s = static_cast<std::int64_t>(rng() % 5001) - 2500;
    worst = std::max(worst, std::abs(oracle.at(s) - g_hat(f, s)));
  }
  CHECK(worst < 1e-6);

  auto grid = g_grid(f, 20);
  long double mean = 0.0L;
  double min_v = 1e300;
  for (double v : grid) {
    mean += v;
    min_v = std::min(min_v, v);
  }
  CHECK(static_cast<double>(mean) / static_cast<double>(grid.size()) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(min_v >= -1e-10);

  // Samples vanish away from the stage support (union of the bump intervals).
  auto sys = support_system({f}, 1);
  const auto n = static_cast<double>(grid.size());
  int outside_hits = 0;
  for (std::size_t i = 0; i < grid.size(); i += 97) {
    const double x = static_cast<double>(i) / n;
    bool inside = false;
    for (const auto& iv : sys.stages[0].merged)
      if (x >= iv.lo - 2.0 / n && x <= iv.hi + 2.0 / n) { inside = true; break; }
    if (!inside && std::fabs(grid[i]) > 1e-8) ++outside_hits;
  }
  CHECK(outside_hits == 0);
}

TEST_CASE("g_grid refuses unresolvable blocks") {
  Fixture fx;
  auto f = fx.desk_factor();  // beta = 857, bump ~ 1.6e-9
  CHECK_THROWS_AS(g_grid(f, 12), std::runtime_error);
}

TEST_CASE("convolution with the unit impulse is exact") {
  Fixture fx;
  auto f = fx.capped_factor(11, 97, 1);
  const std::int64_t S = 512;
  auto impulse = unit_impulse(5 * S);
  auto out = convolve_stage(impulse, f, S, 1e-9, 4 * S);
  for (std::int64_t s = -S; s <= S; ++s) CHECK(out.at(s) == g_hat(f, s));
  CHECK(out.trunc_err == 0.0);
}

TEST_CASE("two-stage engine equals a dense direct convolution") {
  Fixture fx;
  auto f1 = fx.capped_factor(11, 19, 1);
  auto f2 = fx.capped_factor(101, 199, 2);
  const std::int64_t S = 100;
  const std::int64_t Rmax = 4096;
  auto acc1 = accumulate_factor(f1, S + Rmax);
  auto acc2 = convolve_stage(acc1, f2, S, 1e-8, Rmax);
  const std::int64_t R = acc2.radius_G;

  // Independent dense oracle: full [-R, R] loop in ascending t.
  for (std::int64_t s = -S; s <= S; ++s) {
    long double re = 0.0L, im = 0.0L;
    for (std::int64_t t = -R; t <= R; ++t) {
      const auto g = g_hat(f2, t);
      if (g.real() == 0.0 && g.imag() == 0.0) continue;
      const auto h = g_hat(f1, s - t);
      re += static_cast<long double>(h.real()) * g.real() -
            static_cast<long double>(h.imag()) * g.imag();
      im += static_cast<long double>(h.real()) * g.imag() +
            static_cast<long double>(h.imag()) * g.real();
    }
    const std::complex<double> oracle(static_cast<double>(re), static_cast<double>(im));
    CHECK(std::abs(acc2.at(s) - oracle) <= 1e-10);
  }
  CHECK(std::abs(acc2.at(0)) <= 2.0 + acc2.trunc_err);
  CHECK(acc2.hermitian_within(1e-12));
}

TEST_CASE("halving eps never moves a coefficient by more than the old bound") {
  Fixture fx;
  auto f1 = fx.capped_factor(11, 19, 1);
  auto f2 = fx.capped_factor(101, 199, 2);
  const std::int64_t S = 64;
  auto acc1 = accumulate_factor(f1, S + (1 << 14));
  auto coarse = convolve_stage(acc1, f2, S, 1e-4, 1 << 14);
  auto fine = convolve_stage(acc1, f2, S, 5e-5, 1 << 14);
  for (std::int64_t s = -S; s <= S; ++s)
    CHECK(std::abs(coarse.at(s) - fine.at(s)) <= coarse.trunc_err + 1e-18);
}

TEST_CASE("radius-shortfall refusal names the requirement") {
  Fixture fx;
  auto f1 = fx.capped_factor(11, 19, 1);
  auto f2 = fx.capped_factor(101, 199, 2);
  auto acc1 = accumulate_factor(f1, 128);  // far too small for S=100
  CHECK_THROWS_WITH_AS(convolve_stage(acc1, f2, 100, 1e-8, 4096),
                       doctest::Contains("required radius"), std::runtime_error);
}

TEST_CASE("support system: lengths, containment, membership") {
  Fixture fx;
  auto f1 = fx.desk_factor();
  auto f2 = fx.capped_factor(10007, 11000, 2);
  std::vector<FactorSpectrum> stages = {f1, f2};
  auto sys = support_system(stages, 2);

  // Total (pre-merge) length = Sigma_q q psi(q), independent summation.
  long double expect = 0.0L;
  for (std::int64_t q : f1.block.primes)
    expect += static_cast<long double>(q) * std::pow(static_cast<long double>(q), -3.0L);
  CHECK(sys.stages[0].sum_of_lengths ==
        doctest::Approx(static_cast<double>(expect)).epsilon(1e-9));

  // Stage-1 union contains the half-radius interval around every p/11.
  for (std::int64_t p = 1; p <= 11; ++p) {
    const double c = static_cast<double>(p) / 11.0;
    const double r = 0.5 * std::pow(11.0, -3.0);
    bool found = false;
    for (const auto& iv : sys.stages[0].merged)
      if (iv.lo <= c - r + 1e-15 && iv.hi >= std::min(c + r, 1.0) - 1e-15) found = true;
    CHECK(found);
  }

  // Running intersection is monotone under refinement.
  CHECK(sys.running[1].merged_length <= sys.running[0].merged_length + 1e-15);
  for (const auto& iv : sys.running[1].merged) {
    bool inside = false;
    for (const auto& host : sys.stages[0].merged)
      if (host.lo <= iv.lo + 1e-15 && host.hi >= iv.hi - 1e-15) inside = true;
    CHECK(inside);
  }

  // Membership against a direct distance oracle.
  auto member_oracle = [&](double x, const FactorSpectrum& f) {
    for (std::size_t i = 0; i < f.block.primes.size(); ++i) {
      const auto q = static_cast<double>(f.block.primes[i]);
      const double d = std::fabs(x - std::round(x * q) / q);
      if (d <= 0.5 * f.psi_q[i] + 1e-18) return true;
    }
    return false;
  };
  for (double x : {3.0 / 11.0, 0.5, 0.7071067811865476, 0.123456789, 26.0 / 857.0}) {
    auto got = membership(x, stages);
    CHECK(got[0] == member_oracle(x, f1));
    CHECK(got[1] == (member_oracle(x, f1) && member_oracle(x, f2)));
  }
  CHECK(membership(3.0 / 11.0, stages)[0]);
}

TEST_CASE("binary accumulator round trip is bit-exact") {
  Fixture fx;
  auto f = fx.capped_factor(11, 97, 1);
  auto acc = accumulate_factor(f, 500);
  acc.config_hash = 0xabcdef0123456789ull;
  acc.hypothesis_status = "exploratory";
  const std::string path = "/tmp/muhat_test_acc.bin";
  write_accumulator_binary(path, acc);
  auto back = read_accumulator_binary(path);
  CHECK(back.k == acc.k);
  CHECK(back.radius == acc.radius);
  CHECK(back.config_hash == acc.config_hash);
  CHECK(back.hypothesis_status == acc.hypothesis_status);
  REQUIRE(back.coeffs.size() == acc.coeffs.size());
  CHECK(std::memcmp(back.coeffs.data(), acc.coeffs.data(),
                    acc.coeffs.size() * sizeof(std::complex<double>)) == 0);
  std::remove(path.c_str());
}

TEST_CASE("coefficient CSV: ratio column equals abs/envelope") {
  Fixture fx;
  auto f = fx.desk_factor();
  auto acc = accumulate_factor(f, 64);
  auto env = fx.env();
  const std::string path = "/tmp/muhat_test_coeffs.csv";
  write_coeffs_csv(path, acc, env, 64);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "s,re,im,abs,envelope,ratio,trunc_err");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    long long s;
    double re, im, abs_v, env_v, ratio;
    if (std::sscanf(line.c_str(), "%lld,%lf,%lf,%lf,%lf,%lf", &s, &re, &im, &abs_v, &env_v,
                    &ratio) == 6) {
      CHECK(ratio == doctest::Approx(abs_v / env_v).epsilon(1e-12));
      CHECK(env_v == doctest::Approx(env.value(static_cast<double>(std::llabs(s))))
                         .epsilon(1e-12));
    } else {
      CHECK(s == 0);  // the s = 0 row has empty envelope and ratio fields
    }
  }
  CHECK(rows == 129);
  std::remove(path.c_str());
}

TEST_CASE("fast-variant sparse evaluation equals a dense oracle on a small ladder") {
  Fixture fx;
  RajchmanStage st1{2, {11, 23}};
  RajchmanStage st2{2, {101, 211}};
  auto f1 = make_factor_fast(st1, fx.psi, fx.moll, 1);
  auto f2 = make_factor_fast(st2, fx.psi, fx.moll, 2);
  std::vector<FactorSpectrum> stages = {f1, f2};

  CHECK(mu_hat_fast_eval({f1}, 33) == g_hat(f1, 33));
  CHECK(g_hat(f1, 0) == std::complex<double>{1.0, 0.0});

  // Dense oracle over a radius beyond every significant bump of the pair:
  // the widest scale is 1/psi(23) = 12167, and |phi_hat(v)| underflows the
  // tolerance beyond v ~ 300.
  const std::int64_t R = 4'200'000;
  for (std::int64_t s : {0L, 7L, 101L, 222L, 1111L, 5050L}) {
    long double re = 0.0L, im = 0.0L;
    for (std::int64_t t = -R; t <= R; ++t) {
      const auto g = g_hat(f2, t);
      if (g.real() == 0.0 && g.imag() == 0.0) continue;
      const auto h = g_hat(f1, s - t);
      re += static_cast<long double>(h.real()) * g.real() -
            static_cast<long double>(h.imag()) * g.imag();
      im += static_cast<long double>(h.real()) * g.imag() +
            static_cast<long double>(h.imag()) * g.real();
    }
    const std::complex<double> oracle(static_cast<double>(re), static_cast<double>(im));
    CHECK(std::abs(mu_hat_fast_eval(stages, s) - oracle) < 1e-10);
  }
}

TEST_CASE("support lattice order is deterministic: ascending |t|, negative first") {
  Fixture fx;
  auto f = fx.capped_factor(11, 13, 1);
  auto lat = support_lattice(f, 40);
  CHECK(lat == std::vector<std::int64_t>{0, -11, 11, -13, 13, -22, 22, -26, 26, -33, 33, -39, 39});
}
