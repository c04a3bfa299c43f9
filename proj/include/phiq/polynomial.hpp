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

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "phiq/rational.hpp"

namespace phiq {

// Dense univariate polynomial over Q, coefficients stored low degree first.
// The zero polynomial has an empty coefficient vector and degree -1.
class QPoly {
 public:
  QPoly() = default;
  QPoly(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) c_.push_back(c);
  }
  QPoly(long c) : QPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  explicit QPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static QPoly monomial(const Rational& c, int deg) {
    std::vector<Rational> v(static_cast<size_t>(deg) + 1);
    v[deg] = c;
    return QPoly(std::move(v));
  }
  static QPoly x() { return monomial(Rational(1), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : Rational(0);
  }
  Rational lead() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational eval(const Rational& x) const {
    Rational r(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }

  QPoly& operator+=(const QPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  QPoly& operator-=(const QPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
  friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
  friend QPoly operator-(QPoly a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend QPoly operator*(const QPoly& a, const QPoly& b) {
    if (a.is_zero() || b.is_zero()) return QPoly();
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return QPoly(std::move(r));
  }
  QPoly& operator*=(const QPoly& o) { return *this = *this * o; }
  QPoly scaled(const Rational& s) const {
    if (s.is_zero()) return QPoly();
    QPoly r = *this;
    for (auto& x : r.c_) x *= s;
    return r;
  }

  // Euclidean division; throws on a zero divisor.
  static std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
    if (b.is_zero()) throw ZeroDenominator("polynomial division by zero");
    QPoly r = a;
    if (a.degree() < b.degree()) return {QPoly(), r};
    std::vector<Rational> q(a.degree() - b.degree() + 1);
    Rational inv = b.lead().inverse();
    while (!r.is_zero() && r.degree() >= b.degree()) {
      int shift = r.degree() - b.degree();
      Rational f = r.lead() * inv;
      q[shift] = f;
      for (int i = 0; i <= b.degree(); ++i) r.c_[i + shift] -= f * b.c_[i];
      r.trim();
    }
    return {QPoly(std::move(q)), r};
  }

  QPoly monic() const { return is_zero() ? *this : scaled(lead().inverse()); }

  static QPoly gcd(QPoly a, QPoly b) {
    while (!b.is_zero()) {
      QPoly r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  QPoly derivative() const {
    std::vector<Rational> r;
    for (size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i] * Rational(static_cast<long>(i)));
    return QPoly(std::move(r));
  }

  friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }

  // Descending-degree rendering in the variable `var`, e.g. "2*p^2-p+3".
  std::string to_string(const std::string& var = "p") const {
    if (c_.empty()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
      const Rational& a = c_[i];
      if (a.is_zero()) continue;
      Rational mag = abs(a);
      if (a.sign() < 0) out += "-";
      else if (!out.empty()) out += "+";
      if (i == 0) {
        out += mag.to_string();
        continue;
      }
      if (!mag.is_one()) out += mag.to_string() + "*";
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Rational> c_;
};

}  // namespace phiq
