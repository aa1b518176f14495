#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "muhat/fft.hpp"
#include "muhat/spectrum.hpp"

namespace muhat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Catmull-Rom interpolation on the phi grid; u in [-1/2, 1/2).
struct PhiInterp {
  const std::vector<double>& grid;
  double n;
  explicit PhiInterp(const std::vector<double>& g)
      : grid(g), n(static_cast<double>(g.size())) {}
  double operator()(double u) const {
    const double pos = (u + 0.5) * n;
    const auto i1 = static_cast<std::int64_t>(std::floor(pos));
    const double t = pos - static_cast<double>(i1);
    auto at = [&](std::int64_t i) -> double {
      if (i < 0 || i >= static_cast<std::int64_t>(grid.size())) return 0.0;
      return grid[static_cast<std::size_t>(i)];
    };
    const double p0 = at(i1 - 1), p1 = at(i1), p2 = at(i1 + 1), p3 = at(i1 + 2);
    return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                          t * (3.0 * (p1 - p2) + p3 - p0)));
  }
};

void add_bumps(std::vector<double>& out, const PhiInterp& phi, std::int64_t q, double psi,
               double amp) {
  const auto n = static_cast<std::int64_t>(out.size());
  for (std::int64_t p = 1; p <= q; ++p) {
    const double c = static_cast<double>(p) / static_cast<double>(q);
    const auto i_lo = static_cast<std::int64_t>(std::ceil((c - 0.5 * psi) * n));
    const auto i_hi = static_cast<std::int64_t>(std::floor(c * n));
    for (std::int64_t i = i_lo; i <= i_hi; ++i) {
      const double u = (static_cast<double>(i) / n - c) / psi;
      if (u < -0.5 || u > 0.0) continue;
      // p/q = 1 wraps to 0 on the canonical period [0, 1).
      out[static_cast<std::size_t>(((i % n) + n) % n)] += amp * phi(u);
    }
  }
}

}  // namespace

std::vector<double> g_grid(const FactorSpectrum& f, int log2_n) {
  if (log2_n < 10 || log2_n > 24)
    throw std::invalid_argument("g_grid: need 2^10 <= n <= 2^24");
  const std::int64_t n = std::int64_t(1) << log2_n;
  const auto& psis = f.variant == FactorVariant::slow ? f.psi_q : f.psi_rung;
  double min_psi = 1e300;
  for (double v : psis) min_psi = std::min(min_psi, v);
  if (min_psi * static_cast<double>(n) < 16.0) {
    const double needed = 16.0 / min_psi;
    throw std::runtime_error("g_grid: resolution refusal; narrowest bump spans " +
                             format_double(min_psi * static_cast<double>(n)) +
                             " cells, need n >= " + format_double(needed));
  }
  const auto phi_samples = phi_grid(*f.mollifier, std::min(20, log2_n));
  PhiInterp phi(phi_samples);
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  if (f.variant == FactorVariant::slow) {
    for (std::size_t i = 0; i < f.block.primes.size(); ++i) {
      const std::int64_t q = f.block.primes[i];
      // phi_{p,q} amplitude 1/(q^2 chi psi) with the C^{-1} normalizer:
      // weight_q / (q psi) = 1/(q^2 chi psi C).
      add_bumps(out, phi, q, f.psi_q[i], f.weight_q[i] / (static_cast<double>(q) * f.psi_q[i]));
    }
  } else {
    for (std::size_t i = 0; i < f.rungs.size(); ++i) {
      const std::int64_t q = f.rungs[i];
      add_bumps(out, phi, q, f.psi_rung[i],
                1.0 / (static_cast<double>(f.n_k) * static_cast<double>(q) * f.psi_rung[i]));
    }
  }
  return out;
}

std::complex<double> GridCoefficients::at(std::int64_t s) const {
  const auto n = static_cast<std::int64_t>(coeffs.size());
  if (s < -n / 2 || s >= n / 2)
    throw std::out_of_range("grid coefficients: |s| beyond n/2");
  return coeffs[static_cast<std::size_t>(s + n / 2)];
}

GridCoefficients mu_grid_oracle(const std::vector<FactorSpectrum>& stages, int k, int log2_n) {
  if (k < 1 || k > static_cast<int>(stages.size()))
    throw std::invalid_argument("mu_grid_oracle: stage index out of range");
  const std::int64_t n = std::int64_t(1) << log2_n;
  std::vector<double> prod = g_grid(stages[0], log2_n);
  for (int j = 1; j < k; ++j) {
    const auto gj = g_grid(stages[static_cast<std::size_t>(j)], log2_n);
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] *= gj[i];
  }
  std::vector<std::complex<double>> in(prod.size());
  for (std::size_t i = 0; i < prod.size(); ++i) in[i] = {prod[i], 0.0};
  auto spec = fft_forward(in);
  GridCoefficients out;
  out.coeffs.resize(static_cast<std::size_t>(n));
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::int64_t s = -n / 2; s < n / 2; ++s)
    out.coeffs[static_cast<std::size_t>(s + n / 2)] =
        spec[static_cast<std::size_t>((s + n) % n)] * inv_n;
  double alias = 0.0;
  for (int j = 0; j < k; ++j)
    alias = std::max(alias,
                     g_hat_upper_bound(stages[static_cast<std::size_t>(j)],
                                       static_cast<double>(n / 2)));
  out.quadrature_err = alias * static_cast<double>(k);
  return out;
}

std::complex<double> grid_transform_at(const std::vector<double>& samples, double xi) {
  const auto n = static_cast<std::int64_t>(samples.size());
  const double inv_n = 1.0 / static_cast<double>(n);
  std::complex<double> acc{0.0, 0.0};
  // Phase recurrence, re-anchored every 4096 steps to keep drift ~1e-12.
  constexpr std::int64_t kChunk = 4096;
  const std::complex<double> step = std::polar(1.0, -kTwoPi * xi * inv_n);
  for (std::int64_t base = 0; base < n; base += kChunk) {
    std::complex<double> w =
        std::polar(1.0, -kTwoPi * xi * static_cast<double>(base) * inv_n);
    const std::int64_t end = std::min(n, base + kChunk);
    for (std::int64_t i = base; i < end; ++i) {
      acc += samples[static_cast<std::size_t>(i)] * w;
      w *= step;
    }
  }
  return acc * inv_n;
}

namespace {

void append_stage_intervals(std::vector<Interval>& raw, double& total, std::int64_t q,
                            double psi, RadiusConvention conv) {
  const double r = conv == RadiusConvention::half ? 0.5 * psi : psi;
  for (std::int64_t p = 1; p <= q; ++p) {
    const double c = static_cast<double>(p) / static_cast<double>(q);
    double lo = c - r, hi = c + r;
    if (hi > 1.0) {  // p/q = 1 wraps to 0
      raw.push_back({0.0, hi - 1.0});
      hi = 1.0;
    }
    raw.push_back({std::max(0.0, lo), hi});
    total += 2.0 * r;
  }
}

StageIntervals merge(std::vector<Interval> raw, double total) {
  std::sort(raw.begin(), raw.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  StageIntervals st;
  st.sum_of_lengths = total;
  for (const auto& iv : raw) {
    if (!st.merged.empty() && iv.lo <= st.merged.back().hi + 1e-18) {
      st.merged.back().hi = std::max(st.merged.back().hi, iv.hi);
    } else {
      st.merged.push_back(iv);
    }
  }
  for (const auto& iv : st.merged) st.merged_length += iv.length();
  return st;
}

StageIntervals intersect(const StageIntervals& a, const StageIntervals& b) {
  StageIntervals out;
  std::size_t i = 0, j = 0;
  while (i < a.merged.size() && j < b.merged.size()) {
    const double lo = std::max(a.merged[i].lo, b.merged[j].lo);
    const double hi = std::min(a.merged[i].hi, b.merged[j].hi);
    if (lo < hi) out.merged.push_back({lo, hi});
    if (a.merged[i].hi < b.merged[j].hi) ++i; else ++j;
  }
  for (const auto& iv : out.merged) out.merged_length += iv.length();
  out.sum_of_lengths = out.merged_length;
  return out;
}

}  // namespace

IntervalSystem support_system(const std::vector<FactorSpectrum>& stages, int k,
                              RadiusConvention conv, std::int64_t enumeration_cap) {
  if (k < 1 || k > static_cast<int>(stages.size()))
    throw std::invalid_argument("support_system: stage index out of range");
  IntervalSystem sys;
  for (int j = 0; j < k; ++j) {
    const FactorSpectrum& f = stages[static_cast<std::size_t>(j)];
    const auto& primes = f.variant == FactorVariant::slow ? f.block.primes : f.rungs;
    const auto& psis = f.variant == FactorVariant::slow ? f.psi_q : f.psi_rung;
    std::int64_t count = 0;
    for (std::int64_t q : primes) count += q;
    if (count > enumeration_cap)
      throw std::runtime_error("support_system: stage " + std::to_string(j + 1) + " has " +
                               std::to_string(count) +
                               " intervals, beyond the enumeration cap; use membership()");
    std::vector<Interval> raw;
    double total = 0.0;
    for (std::size_t i = 0; i < primes.size(); ++i)
      append_stage_intervals(raw, total, primes[i], psis[i], conv);
    sys.stages.push_back(merge(std::move(raw), total));
    if (j == 0) sys.running.push_back(sys.stages.back());
    else sys.running.push_back(intersect(sys.running.back(), sys.stages.back()));
  }
  return sys;
}

std::vector<bool> membership(double x, const std::vector<FactorSpectrum>& stages,
                             RadiusConvention conv) {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("membership: x must lie in [0,1]");
  std::vector<bool> out;
  bool running = true;
  for (const auto& f : stages) {
    const auto& primes = f.variant == FactorVariant::slow ? f.block.primes : f.rungs;
    const auto& psis = f.variant == FactorVariant::slow ? f.psi_q : f.psi_rung;
    bool in_stage = false;
    for (std::size_t i = 0; i < primes.size() && !in_stage; ++i) {
      const auto q = static_cast<double>(primes[i]);
      const double r = conv == RadiusConvention::half ? 0.5 * psis[i] : psis[i];
      double p = std::round(x * q);
      // p = 0 is the wrapped image of p = q.
      const double dist = std::fabs(x - p / q);
      in_stage = dist <= r + 1e-18;
    }
    running = running && in_stage;
    out.push_back(running);
  }
  return out;
}

void write_coeffs_csv(const std::string& path, const SpectralAccumulator& acc,
                      const DecayEnvelope& env, std::int64_t emit_radius) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw std::runtime_error("cannot open " + path);
  std::fprintf(fp, "s,re,im,abs,envelope,ratio,trunc_err\n");
  const std::int64_t S = std::min(emit_radius, acc.radius);
  for (std::int64_t s = -S; s <= S; ++s) {
    const auto v = acc.at(s);
    const double a = std::abs(v);
    if (s == 0) {
      std::fprintf(fp, "%lld,%s,%s,%s,,,%s\n", static_cast<long long>(s),
                   format_double(v.real()).c_str(), format_double(v.imag()).c_str(),
                   format_double(a).c_str(), format_double(acc.trunc_err).c_str());
    } else {
      const double e = env.value(static_cast<double>(std::llabs(s)));
      std::fprintf(fp, "%lld,%s,%s,%s,%s,%s,%s\n", static_cast<long long>(s),
                   format_double(v.real()).c_str(), format_double(v.imag()).c_str(),
                   format_double(a).c_str(), format_double(e).c_str(),
                   format_double(a / e).c_str(), format_double(acc.trunc_err).c_str());
    }
  }
  std::fclose(fp);
}

namespace {
constexpr char kMagic[8] = {'M', 'U', 'H', 'A', 'T', 'B', '0', '1'};
}

void write_accumulator_binary(const std::string& path, const SpectralAccumulator& acc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.write(kMagic, sizeof kMagic);
  auto w64 = [&](std::int64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
  auto wd = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
  w64(acc.k);
  w64(acc.radius);
  wd(acc.trunc_err);
  w64(static_cast<std::int64_t>(acc.config_hash));
  w64(acc.variant == "slow" ? 0 : 1);
  wd(acc.eps);
  w64(acc.eps_met ? 1 : 0);
  w64(acc.radius_G);
  wd(acc.stage_diff_proxy);
  w64(acc.hypothesis_status == "strict" ? 0 : 1);
  out.write(reinterpret_cast<const char*>(acc.coeffs.data()),
            static_cast<std::streamsize>(acc.coeffs.size() * sizeof(std::complex<double>)));
}

SpectralAccumulator read_accumulator_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw std::runtime_error(path + ": not a muhat accumulator file");
  auto r64 = [&]() { std::int64_t v; in.read(reinterpret_cast<char*>(&v), 8); return v; };
  auto rd = [&]() { double v; in.read(reinterpret_cast<char*>(&v), 8); return v; };
  SpectralAccumulator acc;
  acc.k = static_cast<int>(r64());
  acc.radius = r64();
  acc.trunc_err = rd();
  acc.config_hash = static_cast<std::uint64_t>(r64());
  acc.variant = r64() == 0 ? "slow" : "fast";
  acc.eps = rd();
  acc.eps_met = r64() != 0;
  acc.radius_G = r64();
  acc.stage_diff_proxy = rd();
  acc.hypothesis_status = r64() == 0 ? "strict" : "exploratory";
  acc.coeffs.resize(static_cast<std::size_t>(2 * acc.radius + 1));
  in.read(reinterpret_cast<char*>(acc.coeffs.data()),
          static_cast<std::streamsize>(acc.coeffs.size() * sizeof(std::complex<double>)));
  if (!in) throw std::runtime_error(path + ": truncated accumulator file");
  return acc;
}

}  // namespace muhat
