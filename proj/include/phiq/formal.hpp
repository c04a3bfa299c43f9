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
#include <vector>

#include "phiq/errors.hpp"
#include "phiq/factored.hpp"
#include "phiq/powerseries.hpp"
#include "phiq/series.hpp"

namespace phiq {

namespace detail {

inline Interval clamp_index(long lo, long hi) { return {lo, hi}; }

inline void require_finite(const Interval& iv, const char* what) {
  if (!iv.empty() && !iv.bounded()) {
    throw InsufficientWindow(std::string(what) + ": window admits infinitely many terms");
  }
}

inline void check_two_var_region(const VarId& x1, const VarId& x2, const RegionTag& region) {
  bool ok = region.size() == 2 &&
            ((region[0] == x1 && region[1] == x2) || (region[0] == x2 && region[1] == x1));
  if (!ok) throw LogicFailure("region must name exactly the two variables");
}

}  // namespace detail

// (x1 - lambda*x2)^n expanded in `region`, which lists x1 and x2 in either
// order. Nonnegative powers of the inner variable.
template <class S>
Series<S> linear_power(int n, const S& lambda, const VarId& x1, const VarId& x2,
                       const RegionTag& region, const Window& w) {
  detail::check_two_var_region(x1, x2, region);
  Series<S> r({x1, x2}, n >= 0 ? RegionTag{} : region);
  const Interval w1 = w.get(x1), w2 = w.get(x2);
  if (n >= 0) {
    for (int i = 0; i <= n; ++i) {
      Exps e{n - i, i};
      if (w1.contains(e[0]) && w2.contains(e[1])) {
        r.insert(e, S(binomial(n, i)) * power(-lambda, i));
      }
    }
    r.set_box(0, w1);
    r.set_box(1, w2);
    r.set_support_raw(0, {0, n});
    r.set_support_raw(1, {0, n});
    return r;
  }
  r.set_box(0, w1);
  r.set_box(1, w2);
  if (region[0] == x1) {
    // sum_i C(n,i) (-lambda)^i x1^{n-i} x2^i
    Interval idx{std::max({0L, w2.lo, ext_add(n, w1.hi >= kPosInf ? kNegInf : -w1.hi)}),
                 std::min(w2.hi, w1.lo <= kNegInf ? kPosInf : n - w1.lo)};
    detail::require_finite(idx, "linear_power");
    r.set_support_raw(0, {kNegInf, n});
    r.set_support_raw(1, {0, kPosInf});
    for (long i = idx.lo; i <= idx.hi; ++i) {
      r.insert({static_cast<int>(n - i), static_cast<int>(i)},
               S(binomial(n, i)) * power(-lambda, i));
    }
  } else {
    // (-lambda)^n sum_i C(n,i) (-1/lambda)^i x2^{n-i} x1^i
    Interval idx{std::max({0L, w1.lo, ext_add(n, w2.hi >= kPosInf ? kNegInf : -w2.hi)}),
                 std::min(w1.hi, w2.lo <= kNegInf ? kPosInf : n - w2.lo)};
    detail::require_finite(idx, "linear_power");
    r.set_support_raw(0, {0, kPosInf});
    r.set_support_raw(1, {kNegInf, n});
    S lead = power(-lambda, n);
    S step = -lambda.inverse();
    for (long i = idx.lo; i <= idx.hi; ++i) {
      r.insert({static_cast<int>(i), static_cast<int>(n - i)},
               lead * S(binomial(n, i)) * power(step, i));
    }
  }
  return r;
}

// (x1 - x2)^n in `region` with the binomial convention.
template <class S>
Series<S> binom_expand(int n, const VarId& x1, const VarId& x2, const RegionTag& region,
                       const Window& w) {
  return linear_power<S>(n, S(1), x1, x2, region, w);
}

// Expansion of f(x1/x2) in `region`.
template <class S>
Series<S> iota_expand(const FactoredRational<S>& f, const VarId& x1, const VarId& x2,
                      const RegionTag& region, const Window& w) {
  detail::check_two_var_region(x1, x2, region);
  const int m = f.monomial_exponent();
  int K = 0;
  bool poly = true;
  for (const auto& g : f.factors()) {
    K += g.mult;
    if (g.mult < 0) poly = false;
  }
  const bool outer_x1 = region[0] == x1;
  Series<S> r({x1, x2}, poly ? RegionTag{} : region);
  const Interval w1 = w.get(x1), w2 = w.get(x2);
  r.set_box(0, w1);
  r.set_box(1, w2);
  // Output terms are s^a = x1^a x2^{-a}; a must lie in w1 and -w2.
  Interval a_range = w1.intersect({w2.hi >= kPosInf ? kNegInf : -w2.hi,
                                   w2.lo <= kNegInf ? kPosInf : -w2.lo});
  // In region [x1, x2]: f = c s^{m+K} prod (1 - lambda t)^k, t = 1/s.
  // In region [x2, x1]: f = c prod(-lambda)^k s^m prod (1 - s/lambda)^k.
  const int top = m + K;
  Interval supp = poly ? Interval{m, top} : (outer_x1 ? Interval{kNegInf, top} : Interval{m, kPosInf});
  r.set_support_raw(0, supp);
  r.set_support_raw(1, supp.empty() ? supp
                                    : Interval{supp.hi >= kPosInf ? kNegInf : -supp.hi,
                                               supp.lo <= kNegInf ? kPosInf : -supp.lo});
  Interval want = a_range.intersect(supp);
  if (want.empty()) return r;
  detail::require_finite(want, "iota_expand");
  int order = outer_x1 ? static_cast<int>(top - want.lo) : static_cast<int>(want.hi - m);
  std::vector<S> series{f.constant_factor()};
  series.resize(order + 1, S(0));
  for (const auto& g : f.factors()) {
    S arg = outer_x1 ? -g.root : -g.root.inverse();
    auto b = ps_scale_arg(ps_binomial_series<S>(g.mult, order), arg);
    if (!outer_x1) {
      for (auto& x : b) x *= power(-g.root, g.mult);
    }
    series = ps_mul(series, b, order);
  }
  for (long a = want.lo; a <= want.hi; ++a) {
    long i = outer_x1 ? top - a : a - m;
    r.insert({static_cast<int>(a), static_cast<int>(-a)}, series[i]);
  }
  return r;
}

// One-variable series from dense coefficients c[i] at var^{offset+i}; the
// box is (-inf, offset + size - 1] and the support starts at `floor`.
template <class S>
Series<S> series_from_dense(const VarId& var, const std::vector<S>& c, int offset, long floor) {
  Series<S> r({var});
  r.set_support_raw(0, {floor, kPosInf});
  r.set_box(0, {kNegInf, offset + static_cast<long>(c.size()) - 1});
  for (size_t i = 0; i < c.size(); ++i) r.insert({offset + static_cast<int>(i)}, c[i]);
  return r;
}

// Coefficients at exponents lo..hi of a one-variable series.
template <class S>
std::vector<S> dense_coeffs(const Series<S>& s, long lo, long hi) {
  std::vector<S> out;
  for (long e = lo; e <= hi; ++e) out.push_back(s.coeff({static_cast<int>(e)}));
  return out;
}

// log(1+z) known through z^order.
template <class S>
Series<S> log_series(int order, const VarId& z = "z") {
  check_invariant(order >= 1, "log_series order must be positive");
  auto c = ps_log1p<S>(order);
  return series_from_dense(z, c, 0, 1);
}

// exp(g) for a one-variable series g with positive exponents only.
template <class S>
Series<S> exp_of_series(const Series<S>& g, int order) {
  check_invariant(g.nvars() == 1, "exp_of_series needs a one-variable series");
  for (const auto& [e, c] : g.terms()) {
    if (e[0] == 0) throw NonzeroConstantTerm("exp of a series with a constant term");
    if (e[0] < 0) throw NonzeroConstantTerm("exp of a series with negative exponents");
  }
  const Interval supp = g.support(0), box = g.box(0);
  if (supp.lo < 1 && box.lo > supp.lo) {
    throw InsufficientWindow("low-order coefficients of the exponent are unknown");
  }
  long n = std::min<long>(order, box.hi);
  if (n < 0) throw InsufficientWindow("exp_of_series: no known coefficients");
  std::vector<S> d(n + 1, S(0));
  for (long e = 1; e <= n; ++e) d[e] = g.coeff({static_cast<int>(e)});
  return series_from_dense(g.vars()[0], ps_exp(d, static_cast<int>(n)), 0, 0);
}

// Multiplicative inverse of a one-variable series whose lowest term is
// known and nonzero.
template <class S>
Series<S> series_inverse(const Series<S>& s) {
  check_invariant(s.nvars() == 1, "series_inverse needs a one-variable series");
  if (s.terms().empty()) throw ZeroDenominator("inverse of a zero series");
  const long v = s.terms().begin()->first[0];
  if (!(s.support(0).lo >= v || s.box(0).lo <= s.support(0).lo)) {
    throw InsufficientWindow("series_inverse: valuation not certified");
  }
  long hi = s.box(0).hi;
  if (hi >= kPosInf) {
    // Finite series: choose the caller's responsibility; refuse.
    throw InsufficientWindow("series_inverse: infinite order requested");
  }
  int order = static_cast<int>(hi - v);
  auto u = dense_coeffs(s, v, hi);
  auto inv = ps_inverse(u, order);
  return series_from_dense(s.vars()[0], inv, static_cast<int>(-v), -v);
}

// Truncates a one-variable series (or a chosen variable) to exponents <= hi.
template <class C>
Series<C> truncate_above(const Series<C>& s, const VarId& v, long hi) {
  return s.restricted(v, {kNegInf, hi});
}

// Substitutes var = target * e^{zvar}, expanding e^{m zvar} through
// zvar^zorder. target may be new or already present in s.
template <class C>
Series<C> subst_exp(const Series<C>& s, const VarId& var, const VarId& target, const VarId& zvar,
                    int zorder) {
  const int iv = s.require_index(var);
  check_invariant(s.index_of(zvar) < 0, "subst_exp: z variable already present");
  std::vector<VarId> vars;
  for (const auto& v : s.vars())
    if (v != var) vars.push_back(v);
  if (std::find(vars.begin(), vars.end(), target) == vars.end()) vars.push_back(target);
  vars.push_back(zvar);
  const int it_out = static_cast<int>(std::find(vars.begin(), vars.end(), target) - vars.begin());
  const int iz = static_cast<int>(vars.size()) - 1;
  const int it_in = s.index_of(target);

  RegionTag region = s.region().empty() ? RegionTag{} : RegionTag{target, zvar};
  Series<C> r(vars, region);
  for (size_t i = 0, j = 0; i < s.nvars(); ++i) {
    if (static_cast<int>(i) == iv) continue;
    r.set_box(j, s.box(i));
    r.set_support_raw(j, s.support(i));
    ++j;
  }
  Interval tb, ts;
  if (it_in < 0) {
    tb = s.box(iv);
    ts = s.support(iv);
  } else {
    ts = Interval{ext_add(s.support(iv).lo, s.support(it_in).lo),
                  ext_add(s.support(iv).hi, s.support(it_in).hi)};
    if (!finite_splits(s.support(iv), s.support(it_in))) {
      throw UnboundedExponent("infinitely many exponents of " + var + " contribute");
    }
    tb = product_box(s.box(iv), s.support(iv), s.box(it_in), s.support(it_in));
  }
  r.set_box(it_out, tb);
  r.set_support_raw(it_out, ts);
  r.set_box(iz, {kNegInf, zorder});
  r.set_support_raw(iz, {0, kPosInf});

  std::vector<Rational> inv_fact(zorder + 1);
  for (int k = 0; k <= zorder; ++k) inv_fact[k] = factorial(k).inverse();
  for (const auto& [e, c] : s.terms()) {
    Exps f(vars.size(), 0);
    for (size_t i = 0; i < s.nvars(); ++i) {
      if (static_cast<int>(i) == iv) continue;
      int j = static_cast<int>(std::find(vars.begin(), vars.end(), s.vars()[i]) - vars.begin());
      f[j] = e[i];
    }
    f[it_out] += e[iv];
    bool in = true;
    for (int j = 0; j < iz; ++j)
      if (!r.box(j).contains(f[j])) in = false;
    if (!in) continue;
    Rational m(e[iv]);
    Rational mk(1);
    for (int k = 0; k <= zorder; ++k) {
      f[iz] = k;
      if (k > 0) mk *= m;
      if (mk.is_zero()) break;
      auto& terms = r.raw_terms();
      C v = c * (mk * inv_fact[k]);
      auto [pos, fresh] = terms.try_emplace(f, v);
      if (!fresh) {
        pos->second = pos->second + v;
        if (pos->second.is_zero()) terms.erase(pos);
      }
    }
  }
  return r;
}

// p(e^z) through z^order for a polynomial p.
template <class S>
std::vector<S> poly_at_exp(const FactoredRational<S>& p, int order) {
  auto a = p.poly_coeffs();
  std::vector<S> out(order + 1, S(0));
  for (int k = 0; k <= order; ++k) {
    S acc(0);
    for (size_t n = 0; n < a.size(); ++n) {
      if (a[n].is_zero()) continue;
      acc += a[n] * S(power(Rational(static_cast<long>(n)), k));
    }
    out[k] = acc * S(factorial(k).inverse());
  }
  return out;
}

}  // namespace phiq
