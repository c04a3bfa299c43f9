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
#include <utility>

#include "phiq/polynomial.hpp"
#include "phiq/rational.hpp"

namespace phiq {

// Element of Q(p) kept in canonical form: gcd(num, den) = 1 and den monic.
// Canonical forms are unique, so equality is coefficient-wise.
class RatFunc {
 public:
  RatFunc() : den_(1) {}
  RatFunc(long c) : num_(c), den_(1) {}               // NOLINT
  RatFunc(const Rational& c) : num_(c), den_(1) {}    // NOLINT
  RatFunc(const QPoly& n) : num_(n), den_(1) {}       // NOLINT
  RatFunc(QPoly n, QPoly d) : num_(std::move(n)), den_(std::move(d)) { normalize_in_place(); }

  static RatFunc p() { return RatFunc(QPoly::x()); }

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  RatFunc inverse() const {
    if (is_zero()) throw ZeroDenominator("inverse of zero rational function");
    return RatFunc(den_, num_);
  }

  RatFunc& operator+=(const RatFunc& o) {
    if (is_polynomial() && o.is_polynomial()) {
      num_ += o.num_;
      return *this;
    }
    if (den_ == o.den_) {
      num_ += o.num_;
      normalize_in_place();
      return *this;
    }
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
    normalize_in_place();
    return *this;
  }
  RatFunc& operator-=(const RatFunc& o) { return *this += -o; }
  RatFunc& operator*=(const RatFunc& o) {
    if (is_zero() || o.is_zero()) return *this = RatFunc();
    if (is_polynomial() && o.is_polynomial()) {
      num_ *= o.num_;
      return *this;
    }
    // Cross-cancel before multiplying to keep degrees small.
    QPoly g1 = QPoly::gcd(num_, o.den_);
    QPoly g2 = QPoly::gcd(o.num_, den_);
    QPoly n = QPoly::divmod(num_, g1).first * QPoly::divmod(o.num_, g2).first;
    QPoly d = QPoly::divmod(den_, g2).first * QPoly::divmod(o.den_, g1).first;
    num_ = std::move(n);
    den_ = std::move(d);
    make_monic();
    return *this;
  }
  RatFunc& operator/=(const RatFunc& o) { return *this *= o.inverse(); }

  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  friend RatFunc operator-(RatFunc a) {
    a.num_ = -a.num_;
    return a;
  }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  // Canonical rendering "num(p)/den(p)" with integer coefficients, overall
  // content 1 and positive leading coefficient of the denominator.
  std::string to_string() const {
    if (is_zero()) return "0";
    mpz_class l = 1;
    for (const auto& c : num_.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
    for (const auto& c : den_.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
    QPoly n = num_.scaled(Rational(l));
    QPoly d = den_.scaled(Rational(l));
    mpz_class g = 0;
    for (const auto& c : n.coeffs()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.num().get_mpz_t());
    for (const auto& c : d.coeffs()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.num().get_mpz_t());
    n = n.scaled(Rational(mpz_class(1), g));
    d = d.scaled(Rational(mpz_class(1), g));
    std::string ns = n.to_string("p");
    if (d.degree() == 0 && d.coeff(0).is_one()) return ns;
    auto wrap = [](const QPoly& q, const std::string& s) {
      int terms = 0;
      for (const auto& c : q.coeffs()) terms += c.is_zero() ? 0 : 1;
      return terms > 1 ? "(" + s + ")" : s;
    };
    return wrap(n, ns) + "/" + wrap(d, d.to_string("p"));
  }
  friend std::ostream& operator<<(std::ostream& os, const RatFunc& f) {
    return os << f.to_string();
  }

 private:
  void make_monic() {
    Rational lc = den_.lead();
    if (!lc.is_one()) {
      Rational inv = lc.inverse();
      num_ = num_.scaled(inv);
      den_ = den_.scaled(inv);
    }
  }
  void normalize_in_place() {
    if (den_.is_zero()) throw ZeroDenominator("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = QPoly(1);
      return;
    }
    QPoly g = QPoly::gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = QPoly::divmod(num_, g).first;
      den_ = QPoly::divmod(den_, g).first;
    }
    make_monic();
  }

  QPoly num_;
  QPoly den_;
};

// Canonical form of n/d.
inline RatFunc normalize(const QPoly& n, const QPoly& d) { return RatFunc(n, d); }
inline RatFunc normalize(const RatFunc& f) { return RatFunc(f.num(), f.den()); }

// Evaluates f at p = p0.
inline Rational specialize(const RatFunc& f, const Rational& p0) {
  Rational d = f.den().eval(p0);
  if (d.is_zero()) throw PoleAtPoint("denominator vanishes at p = " + p0.to_string());
  return f.num().eval(p0) / d;
}
inline Rational specialize(const Rational& r, const Rational&) { return r; }

}  // namespace phiq
