#include "muhat/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace muhat {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::hypothesis_unmet: return "hypothesis_unmet";
    case CheckStatus::recorded: return "recorded";
    case CheckStatus::skipped: return "skipped";
  }
  return "?";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CheckEntry& Report::add(const std::string& name, CheckStatus status) {
  entries.push_back(CheckEntry{name, status, {}, {}});
  return entries.back();
}

bool Report::any_failed() const {
  for (const auto& e : entries)
    if (e.status == CheckStatus::fail) return true;
  return false;
}

bool Report::any_hypothesis_unmet() const {
  for (const auto& e : entries)
    if (e.status == CheckStatus::hypothesis_unmet) return true;
  return false;
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["check_id"] = check_id;
  j["parameters"] = parameter_echo;
  j["hypothesis_status"] = hypothesis_status;
  nlohmann::json es = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json je;
    je["name"] = e.name;
    je["status"] = to_string(e.status);
    nlohmann::json vals;
    for (const auto& [k, v] : e.values) {
      if (!std::isfinite(v))
        throw std::logic_error("report " + check_id + "/" + e.name + "/" + k +
                               " is not finite; envelope ratios must stay in the log domain");
      vals[k] = v;
    }
    je["values"] = vals;
    if (!e.note.empty()) je["note"] = e.note;
    es.push_back(je);
  }
  j["entries"] = es;
  return j;
}

std::string Report::to_text() const {
  std::ostringstream os;
  os << "== " << check_id << " (" << hypothesis_status << ") ==\n";
  for (const auto& e : entries) {
    char status[24];
    std::snprintf(status, sizeof status, "%-17s", to_string(e.status));
    os << "  [" << status << "] " << e.name;
    for (const auto& [k, v] : e.values) os << "  " << k << "=" << format_double(v);
    if (!e.note.empty()) os << "  # " << e.note;
    os << "\n";
  }
  return os.str();
}

BaselineStore::BaselineStore(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (in.good()) {
    try {
      in >> data_;
    } catch (...) {
      data_ = nlohmann::json::object();
    }
  } else {
    data_ = nlohmann::json::object();
  }
}

std::optional<double> BaselineStore::check_or_record(const std::string& key, double candidate) {
  if (data_.contains(key)) return data_[key].get<double>();
  data_[key] = candidate;
  dirty_ = true;
  return std::nullopt;
}

void BaselineStore::save() const {
  std::ofstream out(path_);
  out << data_.dump(2) << "\n";
}

}  // namespace muhat
