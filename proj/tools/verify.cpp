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

// verify: batch runner for the phiq check suites.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "phiq/errors.hpp"
#include "phiq/report_json.hpp"
#include "phiq/suites.hpp"

namespace {

constexpr int kExitConfig = 3;
constexpr const char* kReportDirEnv = "PHIQ_REPORT_DIR";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Flat "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw phiq::ConfigError("cannot read config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw phiq::ConfigError(path + ":" + std::to_string(no) + ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

int to_int(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw phiq::ConfigError("'" + key + "' expects an integer, got '" + v + "'");
}

phiq::ScalarField parse_p(const std::string& v) {
  if (v == "symbolic") return phiq::ScalarField::symbolic();
  try {
    return phiq::ScalarField::rational(phiq::Rational::parse(v));
  } catch (const phiq::ParseError& e) {
    throw phiq::ConfigError(std::string("--p: ") + e.what());
  }
}

void parse_flavors(const std::string& v, phiq::SuiteConfig& cfg) {
  const auto dots = v.find("..");
  if (dots == std::string::npos) throw phiq::ConfigError("flavors expects a..b, got '" + v + "'");
  cfg.flavor_lo = to_int("flavors", v.substr(0, dots));
  cfg.flavor_hi = to_int("flavors", v.substr(dots + 2));
}

void apply_setting(const std::string& key, const std::string& v, phiq::SuiteConfig& cfg, std::string& report) {
  if (key == "p") cfg.field = parse_p(v);
  else if (key == "grade") cfg.grade = to_int(key, v);
  else if (key == "modes") cfg.modes = to_int(key, v);
  else if (key == "flavors") parse_flavors(v, cfg);
  else if (key == "zorder") cfg.zorder = to_int(key, v);
  else if (key == "window-margin") cfg.margin = to_int(key, v);
  else if (key == "jobs") cfg.jobs = to_int(key, v);
  else if (key == "report") report = v;
  else throw phiq::ConfigError("unknown config key '" + key + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification suites for phi-coordinated quasi modules"};
  std::string suite;
  std::string config_path;
  std::map<std::string, std::string> flags;
  bool corrupt = false;
  app.add_option("suite", suite, "formal-calc | clifford | dvir | phi-module | commutator | all")->required();
  app.add_option("--config", config_path, "flat key = value config file");
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"p", "rational value or 'symbolic' (default)"},
           {"grade", "grade bound N"},
           {"modes", "mode bound M"},
           {"flavors", "flavor window a..b"},
           {"zorder", "z-order for Y_E^e products"},
           {"window-margin", "window margin"},
           {"report", "JSON report path ('-' for stdout)"},
           {"jobs", "worker threads"}}) {
    app.add_option_function<std::string>("--" + name, [&flags, name](const std::string& v) { flags[name] = v; }, help);
  }
  app.add_flag("--corrupt-character", corrupt, "negative control: use chi(n) = p^{2n}")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  phiq::SuiteConfig cfg;
  std::string report;
  try {
    cfg.suite = suite;
    if (const char* dir = std::getenv(kReportDirEnv); dir && *dir) report = std::string(dir) + "/" + suite + ".json";
    if (!config_path.empty()) {
      for (const auto& [k, v] : read_config_file(config_path)) apply_setting(k, v, cfg, report);
    }
    for (const auto& [k, v] : flags) apply_setting(k, v, cfg, report);
    cfg.corrupt_character = corrupt;
    cfg.validate();
  } catch (const phiq::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::vector<phiq::CheckResult> results;
  try {
    results = phiq::run_suite(cfg);
  } catch (const phiq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  for (const auto& r : results) {
    std::cout << phiq::status_name(r.status) << "  " << r.id;
    if (r.counterexample) std::cout << "  counterexample: " << r.counterexample->value;
    std::cout << "\n";
  }
  const int status = phiq::exit_status(results);
  const auto doc = phiq::report_json(cfg, results);
  if (report == "-") {
    std::cout << doc.dump(2) << "\n";
  } else if (!report.empty()) {
    std::ofstream out(report);
    if (!out) {
      std::cerr << "cannot write report " << report << "\n";
      return kExitConfig;
    }
    out << doc.dump(2) << "\n";
  }
  std::cout << "summary: " << doc["summary"]["pass"] << " pass, " << doc["summary"]["fail"] << " fail, "
            << doc["summary"]["undetermined"] << " undetermined\n";
  return status;
}
