#include "muhat/scales.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace muhat {

namespace {

std::string int128_to_string(__int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  if (neg) v = -v;
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

// ceil(psi(beta)^{-2}) as an exact decimal string when the profile is a pure
// integer power (the desk case), otherwise from the log-domain value.
std::string gap_bound_text(const ApproximationProfile& profile, std::int64_t beta,
                           double log_bound) {
  if (profile.kind == "power") {
    const double two_tau = 2.0 * profile.tau;
    const auto e = static_cast<int>(std::llround(two_tau));
    if (std::fabs(two_tau - e) < 1e-12 && e > 0 && e <= 40) {
      __int128 v = 1;
      bool overflow = false;
      for (int i = 0; i < e; ++i) {
        if (v > (__int128(1) << 120) / beta) { overflow = true; break; }
        v *= beta;
      }
      if (!overflow) return int128_to_string(v);
    }
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6e", std::exp(log_bound));
  return buf;
}

double log_psi_of(const ApproximationProfile& p, std::int64_t q) {
  return p.log_psi(std::log(static_cast<double>(q)));
}

}  // namespace

PrimeBlock select_block(std::int64_t M, const DivergenceWeight& chi, std::int64_t sieve_budget) {
  if (M < 3) throw std::invalid_argument("select_block: M must be >= 3");
  PrimeBlock b;
  b.M = M;
  b.policy = BlockPolicy::min_sum;
  double C = 0.0;
  const std::int64_t hi = std::min(kSieveValueCap, M + sieve_budget);
  for_primes(M, hi, [&](std::int64_t q) {
    b.primes.push_back(q);
    C += 1.0 / (static_cast<double>(q) * chi(static_cast<double>(q)));
    if (C >= 1.0) {
      b.beta = q;
      return false;
    }
    return true;
  });
  if (b.beta == 0)
    throw StrictRefusal("select_block: sieve budget exhausted before C >= 1 (M=" +
                            std::to_string(M) + ", reached q=" + std::to_string(hi) +
                            ", C=" + format_double(C) + ")",
                        std::to_string(hi));
  b.C = C;
  b.prime_count = static_cast<std::int64_t>(b.primes.size());
  return b;
}

PrimeBlock select_block_power(std::int64_t M, double gamma, const DivergenceWeight& chi) {
  if (M < 3) throw std::invalid_argument("select_block_power: M must be >= 3");
  if (!(gamma >= 1.0)) throw std::invalid_argument("select_block_power: gamma must be >= 1");
  const long double target = std::pow(static_cast<long double>(M), static_cast<long double>(gamma));
  if (target > static_cast<long double>(kSieveValueCap))
    throw StrictRefusal("select_block_power: M^gamma = " + std::to_string(static_cast<double>(target)) +
                            " exceeds the sieve domain",
                        format_double(static_cast<double>(target)));
  const auto cap = static_cast<std::int64_t>(std::floor(target + 1e-9L));
  return select_block_capped(M, cap, chi);
}

PrimeBlock select_block_capped(std::int64_t M, std::int64_t beta_cap,
                               const DivergenceWeight& chi) {
  if (M < 3) throw std::invalid_argument("select_block_capped: M must be >= 3");
  PrimeBlock b;
  b.M = M;
  b.policy = BlockPolicy::capped;
  b.beta = 0;
  double C = 0.0;
  if (beta_cap >= M) {
    for_primes(M, beta_cap, [&](std::int64_t q) {
      b.primes.push_back(q);
      C += 1.0 / (static_cast<double>(q) * chi(static_cast<double>(q)));
      return true;
    });
  }
  if (!b.primes.empty()) b.beta = b.primes.back();
  b.C = C;
  b.prime_count = static_cast<std::int64_t>(b.primes.size());
  return b;
}

ScaleSchedule build_schedule_slow(const SlowScheduleSpec& spec,
                                  const ApproximationProfile& profile,
                                  const DivergenceWeight& chi) {
  if (spec.k_max < 1) throw std::invalid_argument("build_schedule_slow: k_max >= 1");
  ScaleSchedule sched;
  sched.mode = spec.mode;

  if (spec.mode == ScheduleMode::strict) {
    std::int64_t M = spec.M1;
    for (int k = 1; k <= spec.k_max; ++k) {
      sched.blocks.push_back(select_block(M, chi, spec.sieve_budget));
      if (k == spec.k_max) break;
      const std::int64_t beta = sched.blocks.back().beta;
      const double log_bound = -2.0 * log_psi_of(profile, beta);
      const std::string bound = gap_bound_text(profile, beta, log_bound);
      if (log_bound > std::log(9.0e18))
        throw StrictRefusal("strict slow schedule: stage " + std::to_string(k + 1) +
                                " requires M >= ceil(psi(beta(M_" + std::to_string(k) +
                                "))^-2) = " + bound + ", beyond representable integers",
                            bound);
      const auto M_next = static_cast<std::int64_t>(std::ceil(std::exp(log_bound)));
      if (M_next > kSieveValueCap)
        throw StrictRefusal("strict slow schedule: stage " + std::to_string(k + 1) +
                                " requires M >= ceil(psi(beta(M_" + std::to_string(k) +
                                "))^-2) = " + bound + "; the sieve domain ends at " +
                                std::to_string(kSieveValueCap),
                            bound);
      M = next_prime_at_least(M_next);
    }
    return sched;
  }

  // Exploratory: user-chosen stages; hypotheses are verified and recorded,
  // never silently assumed.
  std::vector<SlowStageSpec> stages = spec.stages;
  if (stages.empty()) stages.push_back(SlowStageSpec{spec.M1, std::nullopt, std::nullopt});
  if (static_cast<int>(stages.size()) != spec.k_max)
    throw std::invalid_argument("build_schedule_slow: exploratory mode needs one stage spec per k");

  for (int k = 1; k <= spec.k_max; ++k) {
    const SlowStageSpec& st = stages[static_cast<std::size_t>(k - 1)];
    if (k > 1) {
      const PrimeBlock& prev = sched.blocks.back();
      if (st.M <= 4 * prev.beta)
        throw std::invalid_argument("build_schedule_slow: exploratory M_" + std::to_string(k) +
                                    " must exceed 4*beta(M_" + std::to_string(k - 1) + ") = " +
                                    std::to_string(4 * prev.beta));
      const double log_gap = -2.0 * log_psi_of(profile, prev.beta);
      if (std::log(static_cast<double>(st.M)) < log_gap)
        sched.unmet_hypotheses.push_back(
            "stage " + std::to_string(k) + " gap: M_k < psi(beta(M_" + std::to_string(k - 1) +
            "))^-2 = " + gap_bound_text(profile, prev.beta, log_gap));
    }
    PrimeBlock b;
    if (st.beta_cap)
      b = select_block_capped(st.M, *st.beta_cap, chi);
    else if (st.gamma)
      b = select_block_power(st.M, *st.gamma, chi);
    else
      b = select_block(st.M, chi, spec.sieve_budget);
    if (b.primes.empty())
      throw std::invalid_argument("build_schedule_slow: stage " + std::to_string(k) +
                                  " block is empty");
    if (b.C < 1.0 || b.C > 2.0)
      sched.unmet_hypotheses.push_back("stage " + std::to_string(k) +
                                       " normalization: C outside [1,2] (C=" +
                                       format_double(b.C) + ")");
    sched.blocks.push_back(std::move(b));
  }
  return sched;
}

RajchmanSchedule build_schedule_fast(const FastScheduleSpec& spec,
                                     const ApproximationProfile& profile) {
  if (spec.k_max < 1) throw std::invalid_argument("build_schedule_fast: k_max >= 1");
  if (spec.q_start < 11)
    throw std::invalid_argument("build_schedule_fast: q_start region must be >= 11");
  RajchmanSchedule sched;
  sched.mode = spec.mode;

  auto rung_count = [&](int k, std::int64_t strict_n) -> std::int64_t {
    if (spec.mode == ScheduleMode::strict) return strict_n;
    if (k - 1 < static_cast<int>(spec.n.size())) return spec.n[static_cast<std::size_t>(k - 1)];
    return 2;
  };

  std::int64_t q = next_prime_at_least(spec.q_start);
  for (int k = 1; k <= spec.k_max; ++k) {
    RajchmanStage stage;
    if (k == 1) {
      stage.n = rung_count(1, spec.n.empty() ? 2 : spec.n.front());
    } else {
      const RajchmanStage& prev = sched.stages.back();
      const std::int64_t q_last = prev.rungs.back();
      // n_{k+1} = 100 * ceil(psi(q_{k,n_k})^{-2}) in strict mode.
      const double log_n = std::log(100.0) - 2.0 * log_psi_of(profile, q_last);
      if (spec.mode == ScheduleMode::strict) {
        std::string bound;
        if (profile.kind == "power") {
          const auto e = static_cast<int>(std::llround(2.0 * profile.tau));
          __int128 v = 100;
          bool oflow = false;
          for (int i = 0; i < e; ++i) {
            if (v > (__int128(1) << 122) / q_last) { oflow = true; break; }
            v *= q_last;
          }
          bound = oflow ? "overflow" : int128_to_string(v);
        } else {
          char buf[48];
          std::snprintf(buf, sizeof buf, "%.6e", std::exp(log_n));
          bound = buf;
        }
        if (log_n > std::log(1.0e9))  // any larger rung count is out of desk scale
          throw StrictRefusal("strict fast schedule: n_" + std::to_string(k) +
                                  " = 100*ceil(psi(q_{" + std::to_string(k - 1) +
                                  ",n})^-2) = " + bound + " rungs, beyond desk scale",
                              bound);
        stage.n = static_cast<std::int64_t>(std::ceil(std::exp(log_n)));
      } else {
        stage.n = rung_count(k, 2);
      }
      // Inter-stage gap: q_{k,1} >= stage_multiplier / psi(q_{k-1,n}).
      const double log_gap = std::log(spec.stage_multiplier) - log_psi_of(profile, q_last);
      if (log_gap > std::log(static_cast<double>(kSieveValueCap)))
        throw StrictRefusal("fast schedule: stage " + std::to_string(k) +
                                " start M_k >= " + format_double(std::exp(log_gap)) +
                                " exceeds the sieve domain",
                            format_double(std::exp(log_gap)));
      q = next_prime_at_least(static_cast<std::int64_t>(std::ceil(std::exp(log_gap))));
    }

    stage.rungs.push_back(q);
    for (std::int64_t j = 2; j <= stage.n; ++j) {
      const std::int64_t prev_q = stage.rungs.back();
      const double log_psi_prev = log_psi_of(profile, prev_q);
      // eq (qkjcondition): 1/q_j < psi(prev)/2 and psi(q_j) < psi(prev)/2,
      // tightened to the concrete multiplier on 1/psi(prev).
      const double log_lower_mult = std::log(spec.rung_multiplier) - log_psi_prev;
      const double log_lower_psi = profile.log_psi_inv(log_psi_prev - std::log(2.0));
      const double log_lower = std::max(log_lower_mult, log_lower_psi);
      std::int64_t next_rung;
      if (log_lower > std::log(static_cast<double>(kSieveValueCap))) {
        if (spec.mode == ScheduleMode::strict)
          throw StrictRefusal("strict fast schedule: rung q_{" + std::to_string(k) + "," +
                                  std::to_string(j) + "} must exceed " +
                                  format_double(std::exp(log_lower)) +
                                  ", beyond the sieve domain",
                              format_double(std::exp(log_lower)));
        next_rung = next_prime_at_least(static_cast<std::int64_t>(
            std::ceil(spec.fallback_ratio * static_cast<double>(prev_q))));
        sched.unmet_hypotheses.push_back(
            "stage " + std::to_string(k) + " rung " + std::to_string(j) +
            " spacing (qkjcondition) unmet: bound ~" + format_double(std::exp(log_lower)) +
            ", placed at fallback ratio " + format_double(spec.fallback_ratio));
      } else {
        next_rung =
            next_prime_at_least(static_cast<std::int64_t>(std::ceil(std::exp(log_lower))));
      }
      stage.rungs.push_back(next_rung);
    }
    sched.stages.push_back(std::move(stage));
    q = sched.stages.back().rungs.back();
  }
  return sched;
}

namespace {
const char* policy_name(BlockPolicy p) {
  switch (p) {
    case BlockPolicy::min_sum: return "min_sum";
    case BlockPolicy::power: return "power";
    case BlockPolicy::capped: return "capped";
  }
  return "?";
}
BlockPolicy policy_from(const std::string& s) {
  if (s == "min_sum") return BlockPolicy::min_sum;
  if (s == "power") return BlockPolicy::power;
  if (s == "capped") return BlockPolicy::capped;
  throw std::invalid_argument("unknown block policy: " + s);
}
}  // namespace

nlohmann::json to_json(const ScaleSchedule& s) {
  nlohmann::json j;
  j["variant"] = "slow";
  j["mode"] = s.mode == ScheduleMode::strict ? "strict" : "exploratory";
  j["unmet_hypotheses"] = s.unmet_hypotheses;
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : s.blocks) {
    nlohmann::json jb;
    jb["M"] = b.M;
    jb["beta"] = b.beta;
    jb["C"] = b.C;
    jb["policy"] = policy_name(b.policy);
    jb["primes"] = b.primes;
    blocks.push_back(jb);
  }
  j["blocks"] = blocks;
  return j;
}

nlohmann::json to_json(const RajchmanSchedule& s) {
  nlohmann::json j;
  j["variant"] = "fast";
  j["mode"] = s.mode == ScheduleMode::strict ? "strict" : "exploratory";
  j["unmet_hypotheses"] = s.unmet_hypotheses;
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& st : s.stages) {
    nlohmann::json js;
    js["n"] = st.n;
    js["rungs"] = st.rungs;
    stages.push_back(js);
  }
  j["stages"] = stages;
  return j;
}

ScaleSchedule slow_schedule_from_json(const nlohmann::json& j) {
  ScaleSchedule s;
  s.mode = j.at("mode") == "strict" ? ScheduleMode::strict : ScheduleMode::exploratory;
  s.unmet_hypotheses = j.value("unmet_hypotheses", std::vector<std::string>{});
  for (const auto& jb : j.at("blocks")) {
    PrimeBlock b;
    b.M = jb.at("M").get<std::int64_t>();
    b.beta = jb.at("beta").get<std::int64_t>();
    b.C = jb.at("C").get<double>();
    b.policy = policy_from(jb.at("policy").get<std::string>());
    b.primes = jb.at("primes").get<std::vector<std::int64_t>>();
    b.prime_count = static_cast<std::int64_t>(b.primes.size());
    s.blocks.push_back(std::move(b));
  }
  return s;
}

RajchmanSchedule fast_schedule_from_json(const nlohmann::json& j) {
  RajchmanSchedule s;
  s.mode = j.at("mode") == "strict" ? ScheduleMode::strict : ScheduleMode::exploratory;
  s.unmet_hypotheses = j.value("unmet_hypotheses", std::vector<std::string>{});
  for (const auto& js : j.at("stages")) {
    RajchmanStage st;
    st.n = js.at("n").get<std::int64_t>();
    st.rungs = js.at("rungs").get<std::vector<std::int64_t>>();
    s.stages.push_back(std::move(st));
  }
  return s;
}

}  // namespace muhat
