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

#include "phiq/errors.hpp"
#include "phiq/powerseries.hpp"
#include "phiq/rational.hpp"
#include "phiq/scalar.hpp"

namespace phiq {

template <class S>
struct RootFactor {
  S root;
  int mult;
};

// c * x^m * prod (x - root_i)^{mult_i} with nonzero roots and nonzero
// multiplicities. Roots are pairwise distinct after construction via
// make(); the raw constructor keeps the list as given so that validation
// can report repeated roots.
template <class S>
class FactoredRational {
 public:
  FactoredRational() : c_(1) {}
  FactoredRational(S c, int mono, std::vector<RootFactor<S>> factors)
      : c_(std::move(c)), mono_(mono), f_(std::move(factors)) {
    for (const auto& f : f_) {
      check_invariant(!f.root.is_zero(), "factored rational with zero root");
      check_invariant(f.mult != 0, "factored rational with zero multiplicity");
    }
  }

  static FactoredRational one() { return FactoredRational(); }
  static FactoredRational constant(S c) { return FactoredRational(std::move(c), 0, {}); }
  // prod (x - r) over the listed roots, merging repeats into multiplicities.
  static FactoredRational from_roots(const std::vector<S>& roots) {
    FactoredRational r;
    for (const auto& x : roots) r = r * FactoredRational(S(1), 0, {{x, 1}});
    return r;
  }
  static FactoredRational linear(const S& root, int mult = 1) {
    return FactoredRational(S(1), 0, {{root, mult}});
  }

  const S& constant_factor() const { return c_; }
  int monomial_exponent() const { return mono_; }
  const std::vector<RootFactor<S>>& factors() const { return f_; }
  bool is_zero() const { return c_.is_zero(); }

  bool has_distinct_roots() const {
    for (size_t i = 0; i < f_.size(); ++i)
      for (size_t j = i + 1; j < f_.size(); ++j)
        if (f_[i].root == f_[j].root) return false;
    return true;
  }
  bool is_polynomial() const {
    if (mono_ < 0) return false;
    return std::all_of(f_.begin(), f_.end(), [](const auto& f) { return f.mult > 0; });
  }
  int order_at(const S& lambda) const {
    for (const auto& f : f_)
      if (f.root == lambda) return f.mult;
    return 0;
  }
  int degree() const {
    int d = mono_;
    for (const auto& f : f_) d += f.mult;
    return d;
  }

  friend FactoredRational operator*(const FactoredRational& a, const FactoredRational& b) {
    FactoredRational r = a;
    r.c_ = a.c_ * b.c_;
    r.mono_ = a.mono_ + b.mono_;
    for (const auto& g : b.f_) {
      auto it = std::find_if(r.f_.begin(), r.f_.end(), [&](const auto& f) { return f.root == g.root; });
      if (it == r.f_.end()) {
        r.f_.push_back(g);
      } else {
        it->mult += g.mult;
        if (it->mult == 0) r.f_.erase(it);
      }
    }
    return r;
  }
  FactoredRational inverse() const {
    FactoredRational r = *this;
    r.c_ = c_.inverse();
    r.mono_ = -mono_;
    for (auto& f : r.f_) f.mult = -f.mult;
    return r;
  }

  S eval(const S& x) const {
    S v = c_ * power(x, mono_);
    for (const auto& f : f_) v *= power(x - f.root, f.mult);
    return v;
  }

  // Coefficients a_0..a_d of the polynomial; requires is_polynomial().
  std::vector<S> poly_coeffs() const {
    check_invariant(is_polynomial(), "poly_coeffs of a non-polynomial");
    std::vector<S> a{c_};
    auto mul_linear = [&](const S& r) {
      std::vector<S> b(a.size() + 1, S(0));
      for (size_t i = 0; i < a.size(); ++i) {
        b[i + 1] += a[i];
        b[i] -= r * a[i];
      }
      a = std::move(b);
    };
    for (const auto& f : f_)
      for (int k = 0; k < f.mult; ++k) mul_linear(f.root);
    std::vector<S> out(mono_, S(0));
    out.insert(out.end(), a.begin(), a.end());
    return out;
  }

  // Taylor coefficient p^{(k)}(1)/k! of a polynomial.
  S taylor_at_one(int k) const {
    auto a = poly_coeffs();
    S acc(0);
    for (size_t n = 0; n < a.size(); ++n) acc += a[n] * S(binomial(static_cast<long>(n), k));
    return acc;
  }

  std::string to_string() const {
    std::string s = phiq::to_string(c_);
    if (mono_ != 0) s += "*x^" + std::to_string(mono_);
    for (const auto& f : f_) s += "*(x-(" + phiq::to_string(f.root) + "))^" + std::to_string(f.mult);
    return s;
  }

 private:
  S c_;
  int mono_ = 0;
  std::vector<RootFactor<S>> f_;
};

template <class S>
struct PartialFractionTerm {
  S lambda;
  int j;
  S coeff;
};

// f = sum a_ij / (x - lambda_i)^j for f = c * prod (x - lambda_i)^{-k_i}.
template <class S>
std::vector<PartialFractionTerm<S>> partial_fractions(const FactoredRational<S>& f) {
  if (!f.has_distinct_roots()) throw RepeatedRoot("partial fractions need distinct roots");
  check_invariant(f.monomial_exponent() == 0, "partial_fractions: monomial factor present");
  for (const auto& g : f.factors())
    check_invariant(g.mult < 0, "partial_fractions: numerator must be constant");
  std::vector<PartialFractionTerm<S>> out;
  for (const auto& g : f.factors()) {
    const int K = -g.mult;
    // Taylor expansion of f * (x - lambda)^K at x = lambda + h.
    std::vector<S> t{f.constant_factor()};
    t.resize(K, S(0));
    for (const auto& o : f.factors()) {
      if (o.root == g.root) continue;
      S d = g.root - o.root;
      // (d + h)^m = d^m (1 + h/d)^m
      auto bs = ps_scale_arg(ps_binomial_series<S>(o.mult, K - 1), d.inverse());
      for (auto& x : bs) x *= power(d, o.mult);
      t = ps_mul(t, bs, K - 1);
    }
    for (int j = K; j >= 1; --j) out.push_back({g.root, j, t[K - j]});
  }
  return out;
}

}  // namespace phiq
