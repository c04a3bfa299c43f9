// Copyright 2026 The phiq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "phiq/report.hpp"
#include "phiq/suites.hpp"

namespace phiq {

inline nlohmann::ordered_json config_json(const SuiteConfig& cfg) {
  nlohmann::ordered_json j;
  j["suite"] = cfg.suite;
  j["p"] = cfg.field.describe();
  j["grade"] = cfg.grade ? nlohmann::ordered_json(*cfg.grade) : nlohmann::ordered_json(nullptr);
  j["modes"] = cfg.modes;
  j["flavors"] = std::to_string(cfg.flavor_lo) + ".." + std::to_string(cfg.flavor_hi);
  j["zorder"] = cfg.zorder;
  j["window_margin"] = cfg.margin;
  j["corrupt_character"] = cfg.corrupt_character;
  return j;
}

inline nlohmann::ordered_json result_json(const CheckResult& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["status"] = status_name(r.status);
  j["window"] = r.window;
  if (!r.detail.empty()) j["detail"] = r.detail;
  if (r.counterexample) {
    nlohmann::ordered_json ex = nlohmann::ordered_json::array();
    for (const auto& [v, e] : r.counterexample->exponents) ex.push_back({{"var", v}, {"exp", e}});
    j["counterexample"] = {{"exponents", ex}, {"value", r.counterexample->value}};
  }
  return j;
}

// The full report. Everything except the "timing" member is a function of
// the configuration alone.
inline nlohmann::ordered_json report_json(const SuiteConfig& cfg, const std::vector<CheckResult>& rs) {
  nlohmann::ordered_json j;
  j["config"] = config_json(cfg);
  j["results"] = nlohmann::ordered_json::array();
  int counts[3] = {0, 0, 0};
  for (const auto& r : rs) {
    j["results"].push_back(result_json(r));
    ++counts[static_cast<int>(r.status)];
  }
  j["summary"] = {{"checks", rs.size()},
                  {"pass", counts[0]},
                  {"fail", counts[1]},
                  {"undetermined", counts[2]},
                  {"exit_status", exit_status(rs)}};
  nlohmann::ordered_json t = nlohmann::ordered_json::array();
  double total = 0;
  for (const auto& r : rs) {
    t.push_back({{"id", r.id}, {"wall_seconds", r.wall_seconds}});
    total += r.wall_seconds;
  }
  j["timing"] = {{"checks", t}, {"total_check_seconds", total}};
  return j;
}

// The report with the timing member removed.
inline nlohmann::ordered_json report_payload(nlohmann::ordered_json report) {
  report.erase("timing");
  return report;
}

}  // namespace phiq
