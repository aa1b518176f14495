#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace muhat {

enum class CheckStatus { pass, fail, hypothesis_unmet, recorded, skipped };

const char* to_string(CheckStatus s);

// One verified inequality / condition. `values` holds every number the entry
// is based on so the report is reproducible from its own echo.
struct CheckEntry {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  std::map<std::string, double> values;
  std::string note;
};

struct Report {
  std::string check_id;
  nlohmann::json parameter_echo;
  std::string hypothesis_status = "strict";  // "strict" | "exploratory"
  std::vector<CheckEntry> entries;

  CheckEntry& add(const std::string& name, CheckStatus status);
  bool any_failed() const;
  bool any_hypothesis_unmet() const;

  nlohmann::json to_json() const;
  std::string to_text() const;  // aligned, human-readable
};

// Flat JSON baseline store keyed by "<config_hash>/<entry key>". Lookup of a
// missing key records the candidate value (status `recorded`); a present key
// is regression-checked against rel_tol.
class BaselineStore {
 public:
  explicit BaselineStore(std::string path);
  // Returns the stored value if present; otherwise stores `candidate`.
  std::optional<double> check_or_record(const std::string& key, double candidate);
  void save() const;
  bool dirty() const { return dirty_; }

 private:
  std::string path_;
  nlohmann::json data_;
  bool dirty_ = false;
};

// Serialize a double so that it round-trips exactly (shortest form would do;
// %.17g is deterministic across runs which is what the artifacts require).
std::string format_double(double v);

}  // namespace muhat
