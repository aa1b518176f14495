#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace muhat {

// Deterministic segmented sieve of Eratosthenes. Values up to kSieveValueCap
// are supported (base primes up to 2^23.5 fit comfortably in memory); a single
// call may not enumerate a range wider than kSieveRangeCap.
inline constexpr std::int64_t kSieveValueCap = std::int64_t(1) << 47;
inline constexpr std::int64_t kSieveRangeCap = std::int64_t(1) << 27;

// Exactly the primes in [lo, hi], ascending.
std::vector<std::int64_t> sieve(std::int64_t lo, std::int64_t hi);

// Least prime >= n. Throws if the search would leave the sieve domain.
std::int64_t next_prime_at_least(std::int64_t n);

// Greatest prime <= n. Throws if there is none or n leaves the sieve domain.
std::int64_t prev_prime_at_most(std::int64_t n);

// Visits primes in [lo, hi] ascending until visit returns false or the range
// is exhausted. Streams in fixed-size segments; nothing is stored.
void for_primes(std::int64_t lo, std::int64_t hi,
                const std::function<bool(std::int64_t)>& visit);

}  // namespace muhat
