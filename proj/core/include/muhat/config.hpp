#pragma once

// Run configuration: presets, mollifier, schedule, sweep, outputs. The hash
// is stable under key reordering and binds every artifact of a run.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "muhat/approx.hpp"
#include "muhat/mollifier.hpp"
#include "muhat/scales.hpp"

namespace muhat {

struct SweepSpec {
  std::int64_t S = 65536;
  double eps = 1e-6;
  std::int64_t radius_max = std::int64_t(1) << 19;
  int grid_log2_n = 20;
};

struct RunConfig {
  nlohmann::json raw;
  std::uint64_t hash = 0;

  ApproximationProfile profile;
  DivergenceWeight chi;
  GrowthGauge omega;
  std::optional<DimensionFunction> alpha;
  InghamMollifier mollifier;

  std::string schedule_variant = "slow";  // "slow" | "fast"
  SlowScheduleSpec slow_spec;
  FastScheduleSpec fast_spec;

  SweepSpec sweep;
  std::optional<std::string> baseline_path;
};

// Canonical 64-bit hash (FNV-1a over the key-sorted dump).
std::uint64_t config_hash(const nlohmann::json& j);

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

}  // namespace muhat
