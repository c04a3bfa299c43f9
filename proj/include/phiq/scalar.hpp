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

#include <concepts>
#include <string>

#include "phiq/errors.hpp"
#include "phiq/ratfunc.hpp"
#include "phiq/rational.hpp"

namespace phiq {

template <class S>
concept Scalar = std::same_as<S, Rational> || std::same_as<S, RatFunc>;

inline std::string to_string(const Rational& r) { return r.to_string(); }
inline std::string to_string(const RatFunc& f) { return f.to_string(); }

// Which coefficient field a computation runs over: Q(p), or Q with p
// specialized to a rational p0 with |p0| not in {0, 1}.
struct ScalarField {
  enum class Kind { kQ, kQp };
  Kind kind = Kind::kQp;
  Rational p0 = Rational(2);

  static ScalarField symbolic() { return ScalarField{Kind::kQp, Rational(2)}; }
  static ScalarField rational(const Rational& p0) {
    check_point(p0);
    return ScalarField{Kind::kQ, p0};
  }
  static void check_point(const Rational& p0) {
    if (p0.is_zero() || abs(p0).is_one()) {
      throw ConfigError("p0 = " + p0.to_string() + " is 0 or a root of unity");
    }
  }
  bool is_symbolic() const { return kind == Kind::kQp; }
  std::string describe() const { return is_symbolic() ? "symbolic" : p0.to_string(); }
};

// The parameter p as an element of S.
template <Scalar S>
S param_p(const ScalarField& field);

template <>
inline Rational param_p<Rational>(const ScalarField& field) {
  return field.p0;
}
template <>
inline RatFunc param_p<RatFunc>(const ScalarField&) {
  return RatFunc::p();
}

}  // namespace phiq
