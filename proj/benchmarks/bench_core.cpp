#include <benchmark/benchmark.h>

#include <complex>
#include <memory>

#include "muhat/spectrum.hpp"

using namespace muhat;

namespace {

struct Shared {
  ApproximationProfile psi = make_power_profile(3.0);
  DivergenceWeight chi = make_chi_one();
  std::shared_ptr<InghamMollifier> moll =
      std::make_shared<InghamMollifier>(build_mollifier(2.0 / 3.0, 64, 1e-12));
  FactorSpectrum desk = make_factor_slow(select_block(11, chi), psi, chi, moll, 1);
};

Shared& shared() {
  static Shared s;
  return s;
}

}  // namespace

static void BM_phi_hat(benchmark::State& state) {
  const auto& m = *shared().moll;
  const auto s = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(phi_hat(m, s));
}
BENCHMARK(BM_phi_hat)->Arg(10)->Arg(1000)->Arg(100000);

static void BM_g_hat_sweep(benchmark::State& state) {
  const auto& f = shared().desk;
  const std::int64_t S = state.range(0);
  for (auto _ : state) {
    std::complex<double> acc{0.0, 0.0};
    for (std::int64_t s = 1; s <= S; ++s) acc += g_hat(f, s);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * S);
}
BENCHMARK(BM_g_hat_sweep)->Arg(1 << 12)->Arg(1 << 16);

static void BM_convolve_stage(benchmark::State& state) {
  auto& sh = shared();
  auto f1 = make_factor_slow(select_block_capped(11, 19, sh.chi), sh.psi, sh.chi, sh.moll, 1);
  auto f2 = make_factor_slow(select_block_capped(101, 499, sh.chi), sh.psi, sh.chi, sh.moll, 2);
  const std::int64_t S = state.range(0);
  auto acc1 = accumulate_factor(f1, S + (1 << 14));
  for (auto _ : state) {
    auto out = convolve_stage(acc1, f2, S, 1e-8, 1 << 14);
    benchmark::DoNotOptimize(out.coeffs.data());
  }
}
BENCHMARK(BM_convolve_stage)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_sieve_segment(benchmark::State& state) {
  const std::int64_t lo = 1'000'000'000'000;
  const std::int64_t width = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(sieve(lo, lo + width - 1));
  state.SetItemsProcessed(state.iterations() * width);
}
BENCHMARK(BM_sieve_segment)->Arg(1 << 18)->Arg(1 << 22)->Unit(benchmark::kMillisecond);

static void BM_doubling_majorant(benchmark::State& state) {
  const std::int64_t S = state.range(0);
  std::vector<std::complex<double>> table(static_cast<std::size_t>(2 * S + 1));
  for (std::int64_t s = -S; s <= S; ++s)
    table[static_cast<std::size_t>(s + S)] = {1.0 / (1.0 + std::abs(double(s))), 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(doubling_majorant(table));
}
BENCHMARK(BM_doubling_majorant)->Arg(1 << 10)->Arg(1 << 16);

static void BM_mu_fast_eval(benchmark::State& state) {
  auto& sh = shared();
  RajchmanStage st1{2, {11, 10651}};
  auto f1 = make_factor_fast(st1, sh.psi, sh.moll, 1);
  std::vector<FactorSpectrum> stages = {f1};
  for (auto _ : state)
    benchmark::DoNotOptimize(mu_hat_fast_eval(stages, state.range(0)));
}
BENCHMARK(BM_mu_fast_eval)->Arg(11 * 97)->Arg(10651 * 3);

BENCHMARK_MAIN();
