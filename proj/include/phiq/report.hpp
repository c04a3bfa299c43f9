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

#include <atomic>
#include <algorithm>
#include <chrono>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "phiq/errors.hpp"
#include "phiq/series.hpp"

namespace phiq {

enum class Status { kPass, kFail, kUndetermined };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::kPass: return "pass";
    case Status::kFail: return "fail";
    case Status::kUndetermined: return "undetermined";
  }
  return "?";
}

struct Counterexample {
  std::vector<std::pair<std::string, long>> exponents;
  std::string value;
};

struct CheckResult {
  std::string id;
  Status status = Status::kPass;
  std::string window;
  std::optional<Counterexample> counterexample;
  std::string detail;
  double wall_seconds = 0;
};

inline Counterexample make_counterexample(const std::vector<VarId>& vars, const Exps& e,
                                          std::string value) {
  Counterexample c;
  for (size_t i = 0; i < vars.size() && i < e.size(); ++i) c.exponents.push_back({vars[i], e[i]});
  c.value = std::move(value);
  return c;
}

inline std::string window_string(const Window& w) {
  std::string s;
  for (const auto& [v, iv] : w.ranges()) {
    if (!s.empty()) s += " ";
    s += v + "=" + iv.to_string();
  }
  return s;
}

// Runs body(result), timing it. Window shortfalls become undetermined and
// other library errors become failures carrying the message.
template <class F>
CheckResult run_check(std::string id, std::string window, F&& body) {
  CheckResult r;
  r.id = std::move(id);
  r.window = std::move(window);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const InsufficientWindow& e) {
    r.status = Status::kUndetermined;
    r.detail = e.what();
  } catch (const WindowTooSmall& e) {
    r.status = Status::kUndetermined;
    r.detail = e.what();
  } catch (const Error& e) {
    r.status = Status::kFail;
    r.counterexample = Counterexample{{}, e.what()};
  }
  if (r.status == Status::kFail && !r.counterexample) r.counterexample = Counterexample{{}, r.detail};
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// out[i] = fn(i) for i < n, computed on up to `jobs` threads. The output
// order does not depend on scheduling.
template <class T, class F>
std::vector<T> parallel_map(size_t n, int jobs, F&& fn) {
  std::vector<T> out(n);
  const size_t workers = std::min<size_t>(n, static_cast<size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (size_t i = next++; i < n; i = next++) out[i] = fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace phiq
