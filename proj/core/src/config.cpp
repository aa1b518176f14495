#include "muhat/config.hpp"

#include <fstream>
#include <stdexcept>

namespace muhat {

namespace {

std::vector<std::pair<double, double>> points_of(const nlohmann::json& j) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : j.at("points"))
    pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  return pts;
}

ApproximationProfile parse_psi(const nlohmann::json& j, const nlohmann::json& root) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "power") return make_power_profile(j.at("tau").get<double>());
  if (kind == "power_log") return make_power_log_profile(j.at("tau").get<double>());
  if (kind == "table")
    return make_table_profile(points_of(j), j.at("tau").get<double>(),
                              j.at("sigma").get<double>());
  if (kind == "from_alpha") {
    if (!root.contains("alpha"))
      throw std::invalid_argument("psi kind from_alpha requires an alpha block");
    // parsed again by the caller; harmless duplication keeps this local
    const auto& ja = root.at("alpha");
    const std::string ak = ja.at("kind").get<std::string>();
    if (ak == "power") return psi_from_alpha(make_alpha_power(ja.at("nu").get<double>()));
    if (ak == "power_log")
      return psi_from_alpha(make_alpha_power_log(ja.at("nu").get<double>()));
    return psi_from_alpha(make_alpha_table(points_of(ja)));
  }
  throw std::invalid_argument("unknown psi kind: " + kind);
}

DivergenceWeight parse_chi(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "one") return make_chi_one();
  if (kind == "log") return make_chi_log();
  if (kind == "loglog") return make_chi_loglog();
  if (kind == "table") return make_chi_table(points_of(j));
  throw std::invalid_argument("unknown chi kind: " + kind);
}

GrowthGauge parse_omega(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "log") return make_omega_log();
  if (kind == "loglog") return make_omega_loglog();
  if (kind == "logloglog") return make_omega_logloglog();
  if (kind == "table") return make_omega_table(points_of(j));
  throw std::invalid_argument("unknown omega kind: " + kind);
}

DimensionFunction parse_alpha(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "power") return make_alpha_power(j.at("nu").get<double>());
  if (kind == "power_log") return make_alpha_power_log(j.at("nu").get<double>());
  if (kind == "table") return make_alpha_table(points_of(j));
  throw std::invalid_argument("unknown alpha kind: " + kind);
}

}  // namespace

std::uint64_t config_hash(const nlohmann::json& j) {
  // nlohmann objects iterate key-sorted, so dump() is canonical under key
  // reordering. FNV-1a 64.
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

RunConfig parse_config(const nlohmann::json& j) {
  RunConfig cfg;
  cfg.raw = j;
  cfg.hash = config_hash(j);
  cfg.profile = parse_psi(j.at("psi"), j);
  cfg.chi = j.contains("chi") ? parse_chi(j.at("chi")) : make_chi_one();
  cfg.omega = j.contains("omega") ? parse_omega(j.at("omega")) : make_omega_loglog();
  if (j.contains("alpha")) cfg.alpha = parse_alpha(j.at("alpha"));

  const auto& jm = j.at("mollifier");
  cfg.mollifier = build_mollifier(jm.at("beta").get<double>(), jm.at("j_max").get<int>(),
                                  jm.at("tol").get<double>(),
                                  jm.value("beta_prime", 0.0));

  const auto& js = j.at("schedule");
  cfg.schedule_variant = js.at("variant").get<std::string>();
  const ScheduleMode mode = js.value("mode", std::string("exploratory")) == "strict"
                                ? ScheduleMode::strict
                                : ScheduleMode::exploratory;
  if (cfg.schedule_variant == "slow") {
    cfg.slow_spec.mode = mode;
    cfg.slow_spec.k_max = js.value("k_max", 1);
    cfg.slow_spec.M1 = js.value("M1", std::int64_t(11));
    if (js.contains("stages")) {
      for (const auto& st : js.at("stages")) {
        SlowStageSpec s;
        s.M = st.at("M").get<std::int64_t>();
        if (st.contains("beta_cap")) s.beta_cap = st.at("beta_cap").get<std::int64_t>();
        if (st.contains("gamma")) s.gamma = st.at("gamma").get<double>();
        cfg.slow_spec.stages.push_back(s);
      }
      if (cfg.slow_spec.stages.size() == 1) cfg.slow_spec.M1 = cfg.slow_spec.stages[0].M;
    }
  } else if (cfg.schedule_variant == "fast") {
    cfg.fast_spec.mode = mode;
    cfg.fast_spec.k_max = js.value("k_max", 1);
    cfg.fast_spec.q_start = js.value("q_start", std::int64_t(11));
    if (js.contains("n")) cfg.fast_spec.n = js.at("n").get<std::vector<std::int64_t>>();
    cfg.fast_spec.rung_multiplier = js.value("rung_multiplier", 8.0);
    cfg.fast_spec.stage_multiplier = js.value("stage_multiplier", 8.0);
    cfg.fast_spec.fallback_ratio = js.value("fallback_ratio", 2.0);
  } else {
    throw std::invalid_argument("unknown schedule variant: " + cfg.schedule_variant);
  }

  if (j.contains("sweep")) {
    const auto& jw = j.at("sweep");
    cfg.sweep.S = jw.value("S", std::int64_t(65536));
    cfg.sweep.eps = jw.value("eps", 1e-6);
    cfg.sweep.radius_max = jw.value("radius_max", std::int64_t(1) << 19);
    cfg.sweep.grid_log2_n = jw.value("grid_log2_n", 20);
  }
  if (j.contains("baselines")) cfg.baseline_path = j.at("baselines").get<std::string>();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  nlohmann::json j;
  in >> j;
  return parse_config(j);
}

}  // namespace muhat
