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

#include <gmpxx.h>

#include <compare>
#include <ostream>
#include <string>

#include "phiq/errors.hpp"

namespace phiq {

// Exact rational number in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(long n, long d) {
    if (d == 0) throw ZeroDenominator("rational with zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
  }
  explicit Rational(const mpz_class& n) : v_(n) {}
  Rational(const mpz_class& n, const mpz_class& d) {
    if (d == 0) throw ZeroDenominator("rational with zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  // Accepts "a", "-a", "a/b".
  static Rational parse(const std::string& s) {
    if (s.empty()) throw ParseError("empty rational literal");
    size_t i = 0;
    if (s[0] == '-' || s[0] == '+') i = 1;
    bool slash = false;
    bool digits = false;
    for (size_t k = i; k < s.size(); ++k) {
      if (s[k] == '/' && !slash && digits) {
        slash = true;
        digits = false;
      } else if (s[k] >= '0' && s[k] <= '9') {
        digits = true;
      } else {
        throw ParseError("bad rational literal '" + s + "'");
      }
    }
    if (!digits) throw ParseError("bad rational literal '" + s + "'");
    mpq_class q;
    if (q.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0) {
      throw ParseError("bad rational literal '" + s + "'");
    }
    if (q.get_den() == 0) throw ZeroDenominator("rational literal '" + s + "'");
    return Rational(q);
  }

  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  Rational inverse() const {
    if (is_zero()) throw ZeroDenominator("inverse of zero");
    return Rational(mpq_class(1) / v_);
  }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw ZeroDenominator("division by zero");
    v_ /= o.v_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  // "a" for integers, "a/b" otherwise.
  std::string to_string() const { return v_.get_str(); }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

 private:
  mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

// Generic exact integer power for any field type with a unit constructor,
// is_zero() and inverse().
template <class S>
S power(const S& f, long n) {
  if (n < 0) {
    if (f.is_zero()) throw ZeroToNegativePower("zero raised to a negative power");
    return power(f.inverse(), -n);
  }
  S result(1);
  S base = f;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

inline Rational factorial(long n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(r);
}

inline Rational binomial(long n, long k) {
  // Generalized binomial coefficient: n may be negative, k >= 0.
  if (k < 0) return Rational(0);
  Rational r(1);
  for (long i = 0; i < k; ++i) r = r * Rational(n - i) / Rational(i + 1);
  return r;
}

}  // namespace phiq
