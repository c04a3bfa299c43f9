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

#include <vector>

#include "phiq/errors.hpp"
#include "phiq/rational.hpp"

namespace phiq {

// Truncated power series helpers on dense coefficient vectors c[0..N].

template <class S>
std::vector<S> ps_mul(const std::vector<S>& a, const std::vector<S>& b, int order) {
  std::vector<S> r(order + 1, S(0));
  for (int i = 0; i <= order && i < static_cast<int>(a.size()); ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; i + j <= order && j < static_cast<int>(b.size()); ++j) {
      if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
    }
  }
  return r;
}

// Multiplicative inverse; requires a[0] != 0.
template <class S>
std::vector<S> ps_inverse(const std::vector<S>& a, int order) {
  check_invariant(!a.empty() && !a[0].is_zero(), "ps_inverse of a non-unit");
  std::vector<S> r(order + 1, S(0));
  S inv0 = a[0].inverse();
  r[0] = inv0;
  for (int n = 1; n <= order; ++n) {
    S acc(0);
    for (int k = 1; k <= n && k < static_cast<int>(a.size()); ++k) acc += a[k] * r[n - k];
    r[n] = -(acc * inv0);
  }
  return r;
}

// exp(g) for g[0] = 0, via n e_n = sum_k k g_k e_{n-k}.
template <class S>
std::vector<S> ps_exp(const std::vector<S>& g, int order) {
  if (!g.empty() && !g[0].is_zero()) throw NonzeroConstantTerm("exp of a series with constant term");
  std::vector<S> e(order + 1, S(0));
  e[0] = S(1);
  for (int n = 1; n <= order; ++n) {
    S acc(0);
    for (int k = 1; k <= n && k < static_cast<int>(g.size()); ++k) {
      if (!g[k].is_zero()) acc += S(Rational(k)) * g[k] * e[n - k];
    }
    e[n] = acc * S(Rational(1, n));
  }
  return e;
}

// (1 + u)^k for integer k as a series in u.
template <class S>
std::vector<S> ps_binomial_series(long k, int order) {
  std::vector<S> r(order + 1, S(0));
  for (int i = 0; i <= order; ++i) r[i] = S(binomial(k, i));
  return r;
}

// a(c * u): scales the i-th coefficient by c^i.
template <class S>
std::vector<S> ps_scale_arg(std::vector<S> a, const S& c) {
  S f(1);
  for (auto& x : a) {
    x *= f;
    f *= c;
  }
  return a;
}

// log(1 + z) coefficients: 0, 1, -1/2, 1/3, ...
template <class S>
std::vector<S> ps_log1p(int order) {
  std::vector<S> r(order + 1, S(0));
  for (int n = 1; n <= order; ++n) r[n] = S(Rational(n % 2 ? 1 : -1, n));
  return r;
}

// Composition a(b(z)) for b[0] = 0.
template <class S>
std::vector<S> ps_compose(const std::vector<S>& a, const std::vector<S>& b, int order) {
  check_invariant(b.empty() || b[0].is_zero(), "ps_compose needs b(0) = 0");
  std::vector<S> r(order + 1, S(0));
  std::vector<S> pw(order + 1, S(0));
  pw[0] = S(1);
  for (int k = 0; k <= order && k < static_cast<int>(a.size()); ++k) {
    if (!a[k].is_zero()) {
      for (int i = 0; i <= order; ++i) r[i] += a[k] * pw[i];
    }
    pw = ps_mul(pw, b, order);
  }
  return r;
}

}  // namespace phiq
