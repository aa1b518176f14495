#pragma once

// Prime blocks (M_k, beta(M_k), C_k) and the two stage schedules: the
// M_k-block schedule of the slow-decay construction and the (n_k, q_{k,j})
// ladder schedule of the Rajchman construction.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "muhat/approx.hpp"
#include "muhat/sieve.hpp"

namespace muhat {

// Thrown when a strict schedule would leave the representable / sieve domain.
// The violated bound is carried both as text and, when representable, as a
// number. CLI maps this to exit code 2.
struct StrictRefusal : std::runtime_error {
  StrictRefusal(std::string msg, std::string bound)
      : std::runtime_error(std::move(msg)), bound_text(std::move(bound)) {}
  std::string bound_text;
};

enum class BlockPolicy { min_sum, power, capped };

struct PrimeBlock {
  std::int64_t M = 0;     // block start
  std::int64_t beta = 0;  // block end, prime
  double C = 0.0;         // sum of 1/(q chi(q)) over block primes
  BlockPolicy policy = BlockPolicy::min_sum;
  std::int64_t prime_count = 0;
  // Explicit ascending prime list. Complete for every block this toolkit
  // materializes (policies cap beta; nothing is silently dropped).
  std::vector<std::int64_t> primes;
};

// beta = least prime with running sum of 1/(q chi(q)) >= 1; guarantees
// 1 <= C <= 2. Throws StrictRefusal when the sieve budget is exhausted first.
PrimeBlock select_block(std::int64_t M, const DivergenceWeight& chi,
                        std::int64_t sieve_budget = std::int64_t(1) << 27);

// §7 policy: beta = greatest prime <= M^gamma.
PrimeBlock select_block_power(std::int64_t M, double gamma, const DivergenceWeight& chi);

// Exploratory policy: beta = greatest prime <= beta_cap. C may be < 1; the
// schedule records the unmet normalization hypothesis.
PrimeBlock select_block_capped(std::int64_t M, std::int64_t beta_cap,
                               const DivergenceWeight& chi);

enum class ScheduleMode { strict, exploratory };

struct SlowStageSpec {
  std::int64_t M = 0;                       // stage start (user value, exploratory)
  std::optional<std::int64_t> beta_cap;     // capped block policy
  std::optional<double> gamma;              // power block policy
};

struct SlowScheduleSpec {
  ScheduleMode mode = ScheduleMode::exploratory;
  int k_max = 1;
  std::int64_t M1 = 11;
  std::vector<SlowStageSpec> stages;        // exploratory: one entry per stage
  std::int64_t sieve_budget = std::int64_t(1) << 27;
};

struct ScaleSchedule {
  ScheduleMode mode = ScheduleMode::exploratory;
  std::vector<PrimeBlock> blocks;
  std::vector<std::string> unmet_hypotheses;  // empty in strict mode
  bool exploratory() const { return mode == ScheduleMode::exploratory; }
};

// Strict mode: M_{k+1} = next prime >= ceil(psi(beta(M_k))^{-2}); refuses
// loudly (naming the bound) when that leaves the sieve domain. Exploratory
// mode takes the user stages and records which gap hypotheses are unmet.
ScaleSchedule build_schedule_slow(const SlowScheduleSpec& spec,
                                  const ApproximationProfile& profile,
                                  const DivergenceWeight& chi);

struct RajchmanStage {
  std::int64_t n = 0;                 // rung count n_k
  std::vector<std::int64_t> rungs;    // q_{k,1} < ... < q_{k,n_k}, prime
  std::int64_t M() const { return rungs.empty() ? 0 : rungs.front(); }
};

struct FastScheduleSpec {
  ScheduleMode mode = ScheduleMode::exploratory;
  int k_max = 1;
  std::int64_t q_start = 11;
  std::vector<std::int64_t> n;        // user n_k per stage (exploratory)
  double rung_multiplier = 8.0;       // q_{k,j} >= mult / psi(q_{k,j-1})
  double stage_multiplier = 8.0;      // q_{k+1,1} >= mult / psi(q_{k,n_k})
  // Exploratory fallback when the rung bound leaves the sieve domain: next
  // prime >= fallback_ratio * previous rung, recorded as an unmet hypothesis.
  double fallback_ratio = 2.0;
};

struct RajchmanSchedule {
  ScheduleMode mode = ScheduleMode::exploratory;
  std::vector<RajchmanStage> stages;
  std::vector<std::string> unmet_hypotheses;
  bool exploratory() const { return mode == ScheduleMode::exploratory; }
};

// Greedy rung placement per eq. (qkjcondition) with the concrete multiplier;
// strict mode also enforces n_{k+1} = 100 * ceil(psi(q_{k,n_k})^{-2}) and
// refuses when any bound is unrepresentable at desk scale.
RajchmanSchedule build_schedule_fast(const FastScheduleSpec& spec,
                                     const ApproximationProfile& profile);

// Schedules serialize with all primes listed so downstream runs never
// re-sieve.
nlohmann::json to_json(const ScaleSchedule& s);
nlohmann::json to_json(const RajchmanSchedule& s);
ScaleSchedule slow_schedule_from_json(const nlohmann::json& j);
RajchmanSchedule fast_schedule_from_json(const nlohmann::json& j);

}  // namespace muhat
