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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phiq/errors.hpp"
#include "phiq/factored.hpp"
#include "phiq/formal.hpp"
#include "phiq/series.hpp"

namespace phiq {

// A(x2) (x2 d/dx2)^j delta(lambda x2 / x1), delta(y) = sum_n y^n. The
// coefficient of x1^{-n} x2^{n+d} is n^j lambda^n A_d.
template <class S, class C = S>
struct DeltaTerm {
  S lambda;
  int j = 0;
  Series<C> coeff;  // one variable
};

// regular + sum of delta terms.
template <class S, class C = S>
struct FormalDistribution {
  Series<C> regular;
  std::vector<DeltaTerm<S, C>> deltas;
};

namespace detail {

inline Interval diagonal_range(const Interval& w1, const Interval& w2) {
  return {ext_add(w1.lo, w2.lo), ext_add(w1.hi, w2.hi)};
}

// Powers lambda^n for n in [lo, hi].
template <class S>
std::vector<S> power_table(const S& lambda, long lo, long hi) {
  std::vector<S> out;
  if (hi < lo) return out;
  out.reserve(hi - lo + 1);
  S cur = power(lambda, lo);
  for (long n = lo; n <= hi; ++n) {
    out.push_back(cur);
    cur *= lambda;
  }
  return out;
}

}  // namespace detail

template <class S, class C>
Series<C> delta_expand(const DeltaTerm<S, C>& t, const Window& w, const VarId& x1 = "x1",
                       const VarId& x2 = "x2") {
  const Interval w1 = w.get(x1), w2 = w.get(x2);
  if (!w1.bounded() || !w2.bounded()) throw InsufficientWindow("delta_expand needs a finite window");
  const Interval diag = detail::diagonal_range(w1, w2);
  const Series<C>& A = t.coeff;
  for (long d = diag.lo; d <= diag.hi; ++d) {
    if (!A.known({static_cast<int>(d)})) {
      throw InsufficientWindow("delta coefficient unknown at x2^" + std::to_string(d));
    }
  }
  Series<C> r({x1, x2});
  r.set_box(0, w1);
  r.set_box(1, w2);
  const long nlo = -w1.hi, nhi = -w1.lo;
  auto pw = detail::power_table(t.lambda, nlo, nhi);
  for (const auto& [de, a] : A.terms()) {
    const long d = de[0];
    if (!diag.contains(d)) continue;
    for (long n = std::max(nlo, w2.lo - d); n <= std::min(nhi, w2.hi - d); ++n) {
      S f = pw[n - nlo];
      if (t.j > 0) f *= S(power(Rational(n), t.j));
      if (f.is_zero()) continue;
      r.insert({static_cast<int>(-n), static_cast<int>(n + d)}, a * f);
    }
  }
  return r;
}

template <class S, class C>
Series<C> expand(const FormalDistribution<S, C>& f, const Window& w, const VarId& x1 = "x1",
                 const VarId& x2 = "x2") {
  Series<C> r = f.regular.restricted(w).with_region({});
  for (const auto& t : f.deltas) r = r + delta_expand(t, w, x1, x2);
  return r;
}

// f(x2, x2) * A(x2) for the unit delta term. Diagonal sums must be finite.
template <class S, class C>
DeltaTerm<S, C> substitute_diag(const Series<S>& f, const DeltaTerm<S, C>& t,
                                const VarId& x1 = "x1", const VarId& x2 = "x2") {
  check_invariant(t.j == 0 && t.lambda == S(1), "substitute_diag needs delta(x2/x1)");
  const int i1 = f.require_index(x1), i2 = f.require_index(x2);
  if (!finite_splits(f.support(i1), f.support(i2))) {
    throw DiagonalDivergent("f(x2, x2) is an infinite sum");
  }
  Series<S> diag({x2});
  diag.set_support_raw(0, {ext_add(f.support(i1).lo, f.support(i2).lo),
                           ext_add(f.support(i1).hi, f.support(i2).hi)});
  diag.set_box(0, product_box(f.box(i1), f.support(i1), f.box(i2), f.support(i2)));
  for (const auto& [e, c] : f.terms()) {
    Exps d{e[i1] + e[i2]};
    if (diag.box(0).contains(d[0])) diag.insert(d, c);
  }
  return DeltaTerm<S, C>{t.lambda, 0, diag.with_region({}) * t.coeff};
}

struct AnnihilationResult {
  bool zero = false;
  Window certified;
};

// Whether (x1 - lambda x2)^k (x2 d/dx2)^j delta(lambda x2/x1) vanishes on the
// part of `w` where the product is known.
template <class S>
AnnihilationResult annihilation_check_detail(const S& lambda, int k, int j, const Window& w) {
  check_invariant(!lambda.is_zero(), "annihilation_check: lambda = 0");
  DeltaTerm<S> t{lambda, j, Series<S>::constant({"x2"}, S(1))};
  Series<S> d = delta_expand(t, w);
  Series<S> prod = linear_power<S>(k, lambda, "x1", "x2", {"x1", "x2"}, Window{}) * d;
  AnnihilationResult r;
  r.certified = prod.window();
  if (prod.box(0).empty() || prod.box(1).empty()) throw InsufficientWindow("annihilation window empty");
  r.zero = prod.terms().empty();
  return r;
}

template <class S>
bool annihilation_check(const S& lambda, int k, int j, const Window& w) {
  return annihilation_check_detail(lambda, k, j, w).zero;
}

namespace detail {

// Gauss-Jordan inverse of a square matrix over a field.
template <class S>
std::vector<std::vector<S>> invert_matrix(std::vector<std::vector<S>> m) {
  const size_t n = m.size();
  std::vector<std::vector<S>> inv(n, std::vector<S>(n, S(0)));
  for (size_t i = 0; i < n; ++i) inv[i][i] = S(1);
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    // Generalized Vandermonde matrices with distinct nodes are invertible.
    check_invariant(piv < n, "singular generalized Vandermonde system");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    S s = m[col][col].inverse();
    for (size_t k = 0; k < n; ++k) {
      m[col][k] *= s;
      inv[col][k] *= s;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      S f = m[r][col];
      for (size_t k = 0; k < n; ++k) {
        if (!m[col][k].is_zero()) m[r][k] -= f * m[col][k];
        if (!inv[col][k].is_zero()) inv[r][k] -= f * inv[col][k];
      }
    }
  }
  return inv;
}

}  // namespace detail

// Recovers the delta terms whose expansion equals D on D's box: for each
// diagonal d = e1 + e2 (n = -e1), solves sum a_ij(d) n^j lambda_i^n = D[n]
// on the first U = |lambdas| (jmax + 1) points and validates on the rest.
template <class S, class C>
std::vector<DeltaTerm<S, C>> delta_fit(const Series<C>& D, const std::vector<S>& lambdas, int jmax,
                                       const VarId& x1 = "x1", const VarId& x2 = "x2") {
  for (size_t a = 0; a < lambdas.size(); ++a) {
    check_invariant(!lambdas[a].is_zero(), "delta_fit: zero lambda");
    for (size_t b = a + 1; b < lambdas.size(); ++b)
      check_invariant(!(lambdas[a] == lambdas[b]), "delta_fit: repeated lambda");
  }
  const int i1 = D.require_index(x1), i2 = D.require_index(x2);
  const Interval w1 = D.box(i1), w2 = D.box(i2);
  if (!w1.bounded() || !w2.bounded()) throw InsufficientWindow("delta_fit needs a finite window");
  const size_t U = lambdas.size() * static_cast<size_t>(jmax + 1);
  const Interval diag = detail::diagonal_range(w1, w2);

  // Collect diagonal entries.
  std::map<long, std::map<long, C>> entries;  // d -> n -> value
  for (const auto& [e, c] : D.terms()) entries[e[i1] + e[i2]][-e[i1]] = c;

  std::vector<std::vector<std::map<int, C>>> coeff(lambdas.size(),
                                                   std::vector<std::map<int, C>>(jmax + 1));
  long fit_lo = kPosInf, fit_hi = kNegInf;
  std::map<long, std::vector<std::vector<S>>> inverse_cache;
  for (long d = diag.lo; d <= diag.hi; ++d) {
    const long nlo = std::max(-w1.hi, w2.lo - d), nhi = std::min(-w1.lo, w2.hi - d);
    const size_t count = nhi >= nlo ? static_cast<size_t>(nhi - nlo + 1) : 0;
    auto it = entries.find(d);
    if (count < U || U == 0) {
      if (it != entries.end() && !it->second.empty()) {
        if (U == 0) throw NotDeltaSum("nonzero data and no lambdas");
        throw InsufficientWindow("diagonal " + std::to_string(d) + " has " + std::to_string(count) +
                                 " entries, need " + std::to_string(U));
      }
      continue;
    }
    fit_lo = std::min(fit_lo, d);
    fit_hi = std::max(fit_hi, d);
    if (it == entries.end()) continue;
    const auto& row = it->second;
    auto value = [&](long n) {
      auto f = row.find(n);
      return f == row.end() ? C() : f->second;
    };
    auto basis = [&](size_t col, long n) {
      size_t li = col / (jmax + 1);
      int j = static_cast<int>(col % (jmax + 1));
      return power(lambdas[li], n) * S(power(Rational(n), j));
    };
    auto& inv = inverse_cache[nlo];
    if (inv.empty()) {
      std::vector<std::vector<S>> m(U, std::vector<S>(U, S(0)));
      for (size_t r = 0; r < U; ++r)
        for (size_t c = 0; c < U; ++c) m[r][c] = basis(c, nlo + static_cast<long>(r));
      inv = detail::invert_matrix(std::move(m));
    }
    std::vector<C> sol(U);
    for (size_t k = 0; k < U; ++k) {
      C acc{};
      for (size_t r = 0; r < U; ++r) {
        if (inv[k][r].is_zero()) continue;
        C v = value(nlo + static_cast<long>(r));
        if (!v.is_zero()) acc = acc + v * inv[k][r];
      }
      sol[k] = acc;
    }
    for (long n = nlo + static_cast<long>(U); n <= nhi; ++n) {
      C pred{};
      for (size_t k = 0; k < U; ++k) {
        if (!sol[k].is_zero()) pred = pred + sol[k] * basis(k, n);
      }
      if (!((pred - value(n)).is_zero())) {
        throw NotDeltaSum("diagonal " + std::to_string(d) + " fails validation at n = " +
                          std::to_string(n));
      }
    }
    for (size_t k = 0; k < U; ++k) {
      if (!sol[k].is_zero()) coeff[k / (jmax + 1)][k % (jmax + 1)][static_cast<int>(d)] = sol[k];
    }
  }
  std::vector<DeltaTerm<S, C>> out;
  for (size_t li = 0; li < lambdas.size(); ++li) {
    for (int j = 0; j <= jmax; ++j) {
      if (coeff[li][j].empty()) continue;
      Series<C> A({x2});
      A.set_box(0, {fit_lo, fit_hi});
      for (const auto& [d, c] : coeff[li][j]) A.insert({d}, c);
      out.push_back({lambdas[li], j, std::move(A)});
    }
  }
  return out;
}

// Roots of a polynomial annihilator.
template <class S>
std::vector<S> roots_of(const FactoredRational<S>& p) {
  std::vector<S> r;
  for (const auto& f : p.factors()) r.push_back(f.root);
  return r;
}

// Delta terms of a_b - K, where p(x1/x2) (a_b - K) = 0 on the window.
template <class S, class C>
std::vector<DeltaTerm<S, C>> delta_decompose(const Series<C>& a_b, const Series<C>& K,
                                             const FactoredRational<S>& p,
                                             const VarId& x1 = "x1", const VarId& x2 = "x2") {
  check_invariant(p.is_polynomial() && !p.is_zero(), "delta_decompose: p must be a nonzero polynomial");
  check_invariant(p.has_distinct_roots(), "delta_decompose: repeated roots");
  Series<C> diff = a_b.with_region({}) - K.with_region({});
  Series<S> ps = iota_expand(p, x1, x2, {x1, x2}, Window{});
  auto killed = ps * diff;
  if (!killed.terms().empty()) {
    throw AnnihilationFails("p(x1/x2) does not annihilate the difference on the window");
  }
  int jmax = 0;
  for (const auto& f : p.factors()) jmax = std::max(jmax, f.mult - 1);
  return delta_fit(diff, roots_of(p), jmax, x1, x2);
}

// Largest k with A = (x1 - lambda x2)^k B, B(lambda x2, x2) != 0, read off
// from the expansion of A in powers of (x1 - lambda x2):
// the coefficient of (x1 - lambda x2)^m at x2^{d-m} is
// sum_{i+j=d} a_ij C(i, m) lambda^{i-m}.
template <class S>
int vanishing_order(const Series<S>& A, const S& lambda, const VarId& x1 = "x1",
                    const VarId& x2 = "x2", int max_order = 64) {
  check_invariant(!lambda.is_zero(), "vanishing_order: lambda = 0");
  const int i1 = A.require_index(x1), i2 = A.require_index(x2);
  if (A.terms().empty()) throw WindowTooSmall("vanishing_order of a series that is zero on its window");
  if (!finite_splits(A.support(i1), A.support(i2))) {
    throw WindowTooSmall("diagonal sums are infinite");
  }
  const Interval dbox = product_box(A.box(i1), A.support(i1), A.box(i2), A.support(i2));
  std::map<long, std::vector<std::pair<int, S>>> diags;  // d -> (i, a_ij)
  for (const auto& [e, c] : A.terms()) {
    long d = e[i1] + e[i2];
    if (dbox.contains(d)) diags[d].push_back({e[i1], c});
  }
  if (diags.empty()) throw WindowTooSmall("no computable diagonal");
  for (int m = 0; m <= max_order; ++m) {
    for (const auto& [d, row] : diags) {
      S acc(0);
      for (const auto& [i, a] : row) acc += a * S(binomial(i, m)) * power(lambda, i - m);
      if (!acc.is_zero()) return m;
    }
  }
  throw WindowTooSmall("vanishing order exceeds the search bound");
}

struct ThreeTermResult {
  bool holds = false;
  bool precondition = false;
  size_t compared = 0;
  std::optional<std::vector<int>> counterexample;  // (x1, x2, z) exponents
};

// Compares, coefficient-wise in (x1, x2, z), the two sides of
//   (z x2)^{-1} delta((x1-x2)/(z x2)) A - (z x2)^{-1} delta((x2-x1)/(-z x2)) B
//     = x1^{-1} delta(x2(1+z)/x1) C(log(1+z), x2).
// At z^e (n = -e-1) the left side is x2^e [iota12((x1-x2)^n) A -
// iota21((x1-x2)^n) B]; at x1^i z^e the right side is
// x2^m [z^e] ((1+z)^m sum_k C_k(x2) log(1+z)^k) with m = -i-1.
// The comparison runs over x1, x2 in `w` and z exponents [zlo, zorder].
template <class S>
ThreeTermResult three_term_check_detail(const Series<S>& A, const Series<S>& B, const Series<S>& C,
                                        int k, int zlo, int zorder, const Window& w) {
  ThreeTermResult res;
  const Interval w1 = w.get("x1"), w2 = w.get("x2");
  if (!w1.bounded() || !w2.bounded()) throw InsufficientWindow("three_term_check needs a finite window");
  const long span = std::max(w1.hi - w1.lo, w2.hi - w2.lo) + 2;
  Window wide;
  wide.set("x1", w1.lo - 2 * span, w1.hi + 2 * span).set("x2", w2.lo - 2 * span, w2.hi + 2 * span);

  // Precondition: (x1-x2)^k A = (x1-x2)^k B where both are known.
  {
    auto lk = binom_expand<S>(k, "x1", "x2", {"x1", "x2"}, Window{});
    auto pa = lk * A.with_region({});
    auto pb = lk * B.with_region({});
    res.precondition = equal_on_window(pa, pb);
  }

  const int ix0 = C.require_index("x0"), ix2 = C.require_index("x2");
  const Interval c0 = C.support(ix0);
  if (c0.lo <= kNegInf) throw InsufficientWindow("C has unbounded negative x0 powers");
  const int kmin = static_cast<int>(std::min<long>(c0.lo, 0));
  const int order = zorder - kmin + 1;
  // u = log(1+z)/z, (1+z)^m and u^k as dense series.
  std::vector<S> u(order + 1, S(0));
  {
    auto l = ps_log1p<S>(order + 1);
    for (int i = 0; i <= order; ++i) u[i] = l[i + 1];
  }
  std::map<int, std::vector<S>> upow;
  auto u_power = [&](int kk) -> const std::vector<S>& {
    auto it = upow.find(kk);
    if (it != upow.end()) return it->second;
    std::vector<S> base = kk >= 0 ? u : ps_inverse(u, order);
    std::vector<S> r(order + 1, S(0));
    r[0] = S(1);
    for (int t = 0; t < std::abs(kk); ++t) r = ps_mul(r, base, order);
    return upow[kk] = r;
  };
  // gamma(m, kk, e) = [z^e] (1+z)^m log(1+z)^kk = [z^{e-kk}] (1+z)^m u^kk.
  auto gamma = [&](int m, int kk, int e) {
    int t = e - kk;
    if (t < 0) return S(0);
    auto b = ps_binomial_series<S>(m, t);
    const auto& up = u_power(kk);
    S acc(0);
    for (int a = 0; a <= t; ++a) acc += b[a] * up[t - a];
    return acc;
  };

  for (int e = zlo; e <= zorder; ++e) {
    const int n = -e - 1;
    auto l12 = binom_expand<S>(n, "x1", "x2", {"x1", "x2"}, wide);
    auto l21 = binom_expand<S>(n, "x1", "x2", {"x2", "x1"}, wide);
    Series<S> lhs = shifted((l12 * A).with_region({}) - (l21 * B).with_region({}), Exps{0, e});
    for (long i = w1.lo; i <= w1.hi; ++i) {
      const int m = static_cast<int>(-i - 1);
      for (long j = w2.lo; j <= w2.hi; ++j) {
        Exps le{static_cast<int>(i), static_cast<int>(j)};
        if (!lhs.known(le)) continue;
        // Right side needs C at x2^{j-m} for kk in [kmin, e].
        bool known = true;
        S rhs(0);
        for (int kk = kmin; kk <= e; ++kk) {
          Exps ce(2);
          ce[ix0] = kk;
          ce[ix2] = static_cast<int>(j - m);
          if (!C.known(ce)) {
            known = false;
            break;
          }
          S cv = C.coeff(ce);
          if (!cv.is_zero()) rhs += cv * gamma(m, kk, e);
        }
        if (!known) continue;
        ++res.compared;
        if (!(lhs.coeff(le) == rhs)) {
          res.holds = false;
          res.counterexample = std::vector<int>{le[0], le[1], e};
          return res;
        }
      }
    }
  }
  if (res.compared == 0) throw InsufficientWindow("three_term_check compared no coefficients");
  res.holds = true;
  return res;
}

template <class S>
bool three_term_check(const Series<S>& A, const Series<S>& B, const Series<S>& C, int k, int zorder,
                      const Window& w) {
  return three_term_check_detail(A, B, C, k, -zorder, zorder, w).holds;
}

// Consistent three-term data from a Laurent polynomial F(x1, x2):
// A = iota12((x1-x2)^{-k}) F, B = iota21((x1-x2)^{-k}) F,
// C = x2^{-k} (e^{x0}-1)^{-k} F(x2 e^{x0}, x2).
template <class S>
struct ThreeTermData {
  Series<S> A, B, C;
};

template <class S>
ThreeTermData<S> three_term_data(const Series<S>& F, int k, int zorder, const Window& w) {
  ThreeTermData<S> d;
  d.A = binom_expand<S>(-k, "x1", "x2", {"x1", "x2"}, w) * F;
  d.B = binom_expand<S>(-k, "x1", "x2", {"x2", "x1"}, w) * F;
  Series<S> sub = subst_exp(F.aligned({"x1", "x2"}), "x1", "x2", "x0", zorder + k);
  // ((e^{x0}-1)/x0)^{-k} through x0^{zorder+k}.
  const int order = zorder + k;
  std::vector<S> q(order + 1, S(0));
  for (int i = 0; i <= order; ++i) q[i] = S(factorial(i + 1).inverse());
  std::vector<S> qk(order + 1, S(0));
  qk[0] = S(1);
  auto qi = ps_inverse(q, order);
  for (int t = 0; t < k; ++t) qk = ps_mul(qk, qi, order);
  Series<S> factor = series_from_dense<S>("x0", qk, -k, -k);
  d.C = shifted(sub * factor, Exps{-k, 0});
  return d;
}

}  // namespace phiq
