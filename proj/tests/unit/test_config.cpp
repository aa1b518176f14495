#include <doctest.h>

#include "muhat/config.hpp"

using namespace muhat;

TEST_CASE("config hash is stable under key reordering") {
  const auto a = nlohmann::json::parse(R"({"psi":{"kind":"power","tau":3.0},"chi":{"kind":"one"}})");
  const auto b = nlohmann::json::parse(R"({"chi":{"kind":"one"},"psi":{"tau":3.0,"kind":"power"}})");
  CHECK(config_hash(a) == config_hash(b));
  const auto c = nlohmann::json::parse(R"({"chi":{"kind":"one"},"psi":{"tau":3.5,"kind":"power"}})");
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("config parsing: presets, schedule, sweep") {
  const auto j = nlohmann::json::parse(R"({
    "psi": {"kind": "power", "tau": 3.0},
    "chi": {"kind": "loglog"},
    "omega": {"kind": "logloglog"},
    "alpha": {"kind": "power", "nu": 0.6666666666666666},
    "mollifier": {"beta": 0.6666666666666666, "j_max": 64, "tol": 1e-12},
    "schedule": {"variant": "slow", "mode": "exploratory", "k_max": 2,
                 "stages": [{"M": 11}, {"M": 10007, "beta_cap": 30011}]},
    "sweep": {"S": 2000, "eps": 1e-6, "radius_max": 524288, "grid_log2_n": 20}
  })");
  auto cfg = parse_config(j);
  CHECK(cfg.profile.tau == 3.0);
  CHECK(cfg.chi.kind == "loglog");
  CHECK(cfg.omega.kind == "logloglog");
  REQUIRE(cfg.alpha.has_value());
  CHECK(cfg.mollifier.j_max == 64);
  CHECK(cfg.slow_spec.stages.size() == 2);
  CHECK(cfg.slow_spec.stages[1].beta_cap == 30011);
  CHECK(cfg.sweep.S == 2000);
  CHECK(cfg.hash == config_hash(j));
}

TEST_CASE("config parsing: psi from alpha") {
  const auto j = nlohmann::json::parse(R"({
    "psi": {"kind": "from_alpha"},
    "alpha": {"kind": "power", "nu": 0.6666666666666666},
    "mollifier": {"beta": 0.6666666666666666, "j_max": 64, "tol": 1e-12},
    "schedule": {"variant": "slow", "k_max": 1, "stages": [{"M": 11}]}
  })");
  auto cfg = parse_config(j);
  CHECK(cfg.profile.tau == doctest::Approx(3.0));
  CHECK(cfg.profile.psi(7.0) == doctest::Approx(std::pow(7.0, -3.0)).epsilon(1e-12));
}

TEST_CASE("config parsing: unknown kinds are rejected") {
  auto j = nlohmann::json::parse(R"({
    "psi": {"kind": "exp"},
    "mollifier": {"beta": 0.5, "j_max": 64, "tol": 1e-12},
    "schedule": {"variant": "slow", "k_max": 1}
  })");
  CHECK_THROWS_AS(parse_config(j), std::invalid_argument);
  j["psi"] = {{"kind", "power"}, {"tau", 3.0}};
  j["schedule"] = {{"variant", "medium"}, {"k_max", 1}};
  CHECK_THROWS_AS(parse_config(j), std::invalid_argument);
}
