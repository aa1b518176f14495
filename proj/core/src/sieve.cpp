#include "muhat/sieve.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace muhat {

namespace {

// Base primes are cached and extended on demand; the cap keeps the cache
// below ~16 MB of bits even at the top of the sieve domain.
std::vector<std::int64_t>& base_prime_cache() {
  static std::vector<std::int64_t> cache;
  return cache;
}
std::int64_t& base_prime_limit() {
  static std::int64_t limit = 1;
  return limit;
}

void ensure_base_primes(std::int64_t limit) {
  if (limit <= base_prime_limit()) return;
  limit = std::max<std::int64_t>(limit, 1 << 16);
  std::vector<bool> comp(static_cast<std::size_t>(limit) + 1, false);
  std::vector<std::int64_t> primes;
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (comp[static_cast<std::size_t>(i)]) continue;
    primes.push_back(i);
    for (std::int64_t j = i * i; j <= limit; j += i) comp[static_cast<std::size_t>(j)] = true;
  }
  base_prime_cache() = std::move(primes);
  base_prime_limit() = limit;
}

std::int64_t isqrt64(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

void check_domain(std::int64_t lo, std::int64_t hi) {
  if (lo < 2 || lo > hi)
    throw std::invalid_argument("sieve: require 2 <= lo <= hi, got [" + std::to_string(lo) +
                                ", " + std::to_string(hi) + "]");
  if (hi > kSieveValueCap)
    throw std::invalid_argument("sieve: hi = " + std::to_string(hi) +
                                " exceeds the sieve domain cap 2^47 = " +
                                std::to_string(kSieveValueCap));
}

// One marked segment [lo, hi]; assumes base primes cover sqrt(hi).
void segment_primes(std::int64_t lo, std::int64_t hi, std::vector<std::int64_t>& out) {
  const std::size_t width = static_cast<std::size_t>(hi - lo + 1);
  std::vector<bool> comp(width, false);
  const std::int64_t root = isqrt64(hi);
  for (std::int64_t p : base_prime_cache()) {
    if (p > root) break;
    std::int64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
    for (std::int64_t j = start; j <= hi; j += p) comp[static_cast<std::size_t>(j - lo)] = true;
  }
  for (std::size_t i = 0; i < width; ++i) {
    const std::int64_t v = lo + static_cast<std::int64_t>(i);
    if (v >= 2 && !comp[i]) out.push_back(v);
  }
}

}  // namespace

std::vector<std::int64_t> sieve(std::int64_t lo, std::int64_t hi) {
  check_domain(lo, hi);
  if (hi - lo + 1 > kSieveRangeCap)
    throw std::invalid_argument("sieve: range width " + std::to_string(hi - lo + 1) +
                                " exceeds the per-call budget 2^27; stream with for_primes");
  ensure_base_primes(isqrt64(hi));
  std::vector<std::int64_t> out;
  segment_primes(lo, hi, out);
  return out;
}

void for_primes(std::int64_t lo, std::int64_t hi,
                const std::function<bool(std::int64_t)>& visit) {
  check_domain(lo, hi);
  ensure_base_primes(isqrt64(hi));
  constexpr std::int64_t kSegment = 1 << 22;
  std::vector<std::int64_t> buf;
  for (std::int64_t seg_lo = lo; seg_lo <= hi; ) {
    const std::int64_t seg_hi = std::min(hi, seg_lo + kSegment - 1);
    buf.clear();
    segment_primes(seg_lo, seg_hi, buf);
    for (std::int64_t p : buf)
      if (!visit(p)) return;
    if (seg_hi == hi) break;
    seg_lo = seg_hi + 1;
  }
}

std::int64_t next_prime_at_least(std::int64_t n) {
  n = std::max<std::int64_t>(n, 2);
  std::int64_t window = 1 << 12;
  for (std::int64_t lo = n; lo <= kSieveValueCap; ) {
    const std::int64_t hi = std::min(kSieveValueCap, lo + window - 1);
    std::int64_t found = 0;
    for_primes(lo, hi, [&](std::int64_t p) { found = p; return false; });
    if (found) return found;
    if (hi == kSieveValueCap) break;
    lo = hi + 1;
    window *= 2;
  }
  throw std::domain_error("next_prime_at_least: no prime found at or above " +
                          std::to_string(n) + " within the sieve domain");
}

std::int64_t prev_prime_at_most(std::int64_t n) {
  if (n < 2) throw std::domain_error("prev_prime_at_most: no prime <= " + std::to_string(n));
  if (n > kSieveValueCap)
    throw std::domain_error("prev_prime_at_most: " + std::to_string(n) +
                            " exceeds the sieve domain cap");
  std::int64_t window = 1 << 12;
  for (std::int64_t hi = n; hi >= 2; ) {
    const std::int64_t lo = std::max<std::int64_t>(2, hi - window + 1);
    std::int64_t found = 0;
    for_primes(lo, hi, [&](std::int64_t p) { found = p; return true; });
    if (found) return found;
    if (lo == 2) break;
    hi = lo - 1;
    window *= 2;
  }
  throw std::domain_error("prev_prime_at_most: no prime <= " + std::to_string(n));
}

}  // namespace muhat
