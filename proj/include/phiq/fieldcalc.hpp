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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "phiq/distributions.hpp"
#include "phiq/errors.hpp"
#include "phiq/factored.hpp"
#include "phiq/fock.hpp"
#include "phiq/formal.hpp"
#include "phiq/powerseries.hpp"
#include "phiq/series.hpp"

namespace phiq {

template <class S>
using FockSeries = Series<FockVector<S>>;

// a(lambda x) for the flavor-r field of a Fock module, or the identity
// field 1_W. Holds a pointer to the module, which must outlive it.
template <class S>
class FieldOperator {
 public:
  FieldOperator() = default;

  static FieldOperator mode_field(const FockModule<S>& m, int flavor, S scale = S(1)) {
    m.spec().check_flavor(flavor);
    FieldOperator f;
    f.module_ = &m;
    f.flavor_ = flavor;
    f.scale_ = std::move(scale);
    return f;
  }
  static FieldOperator identity(const FockModule<S>& m) {
    FieldOperator f;
    f.module_ = &m;
    f.identity_ = true;
    return f;
  }

  const FockModule<S>& module() const { return *module_; }
  int flavor() const { return flavor_; }
  const S& scale() const { return scale_; }
  bool is_identity() const { return identity_; }

  FieldOperator scaled(const S& mu) const {
    FieldOperator r = *this;
    if (!identity_) r.scale_ = scale_ * mu;
    return r;
  }

  // Exponents of x below this carry zero coefficients on w.
  long floor(const FockVector<S>& w) const {
    if (identity_) return 0;
    return -(module_->restriction_bound(flavor_, w) - 1) - module_->spec().nu();
  }

  FockVector<S> coefficient(long i, const FockVector<S>& w) const {
    if (identity_) return i == 0 ? w : FockVector<S>();
    const int n = static_cast<int>(-i - module_->spec().nu());
    FockVector<S> v = module_->apply_mode(flavor_, n, w);
    if (v.is_zero()) return v;
    return v * power(scale_, i);
  }

  FockSeries<S> apply(const FockVector<S>& w, const Interval& window, const VarId& var = "x") const {
    if (!identity_) return module_->apply_field(flavor_, scale_, w, window, var);
    FockSeries<S> out({var});
    out.set_box(0, window);
    out.set_support_raw(0, Interval::point(0));
    if (window.contains(0)) out.insert({0}, w);
    return out;
  }

  std::string describe() const {
    if (identity_) return "1";
    return "a" + std::to_string(flavor_) + "((" + phiq::to_string(scale_) + ")x)";
  }

 private:
  const FockModule<S>* module_ = nullptr;
  int flavor_ = 0;
  S scale_ = S(1);
  bool identity_ = false;
};

// One twisted term f(x2/x1) b(x2) a(x1) of the reversed side.
template <class S>
struct Partner {
  FieldOperator<S> b;
  FieldOperator<S> a;
  FactoredRational<S> f;
};

// p(x1/x2) a(x1) b(x2) = p(x1/x2) sum_i iota_{x2,x1}(f_i(x2/x1)) b_i(x2) a_i(x1).
template <class S>
struct LocalityDatum {
  FieldOperator<S> a;
  FieldOperator<S> b;
  std::vector<Partner<S>> partners;
  FactoredRational<S> p;
};

// The group Z acting on flavors by shifts, with character chi(n) = base^n,
// and the realized field of each flavor.
template <class S>
struct CovariantStructure {
  S chi_base = S(2);
  int flavor_lo = 0;
  int flavor_hi = 0;
  std::function<FieldOperator<S>(int)> field;

  S chi(int n) const { return power(chi_base, n); }
  void check_flavor(int r) const {
    if (r < flavor_lo || r > flavor_hi) {
      throw FlavorOutOfWindow("flavor " + std::to_string(r) + " outside [" +
                              std::to_string(flavor_lo) + "," + std::to_string(flavor_hi) + "]");
    }
  }
  // Shifts g relating any two flavors of the window, one step beyond.
  int group_span() const { return flavor_hi - flavor_lo + 1; }
};

// Target exponents of x for mode products, and the slack used below the
// estimated lowest x1 exponent when certifying compatibility.
struct FieldWindow {
  Interval x{-4, 4};
  int margin = 4;
};

enum class Compat { kCompatibleOnWindow, kIncompatible, kUndetermined };

inline const char* compat_name(Compat c) {
  switch (c) {
    case Compat::kCompatibleOnWindow: return "compatible-on-window";
    case Compat::kIncompatible: return "incompatible";
    case Compat::kUndetermined: return "undetermined";
  }
  return "?";
}

struct CompatResult {
  Compat verdict = Compat::kUndetermined;
  long bound = 0;  // lowest x1 exponent with a nonzero coefficient
  Window window;
  std::optional<Exps> witness;
};

// Mode products (a_n^e b)(x) w as series in x for n in [lowest, k - 1];
// modes n >= k vanish.
template <class S>
struct ModeData {
  int k = 0;
  int lowest = 0;
  std::map<int, FockSeries<S>> modes;

  FockSeries<S> mode(int n) const {
    auto it = modes.find(n);
    if (it != modes.end()) return it->second;
    if (n < lowest) throw OutsideWindow("mode " + std::to_string(n) + " below computed range");
    FockSeries<S> z({"x"});
    z.set_support_raw(0, Interval::none());
    return z;
  }
};

template <class S>
bool operator==(const ModeData<S>& a, const ModeData<S>& b) {
  const int lo = std::max(a.lowest, b.lowest);
  const int hi = std::max(a.k, b.k);
  for (int n = lo; n < hi; ++n) {
    if (first_difference(a.mode(n), b.mode(n))) return false;
  }
  return true;
}

namespace detail {

inline Interval widen(const Interval& iv, long dlo, long dhi) {
  if (iv.empty()) return iv;
  return {ext_add(iv.lo, dlo), ext_add(iv.hi, dhi)};
}

template <class S>
void require_annihilator(const FactoredRational<S>& p) {
  if (p.is_zero()) throw ZeroPolynomial("annihilator is the zero polynomial");
  if (!p.is_polynomial()) throw ConfigError("annihilator must be a polynomial: " + p.to_string());
}

template <class S>
bool is_laurent_poly(const FactoredRational<S>& q) {
  return std::all_of(q.factors().begin(), q.factors().end(), [](const auto& f) { return f.mult > 0; });
}

// g(s) = f(1/s).
template <class S>
FactoredRational<S> reflect(const FactoredRational<S>& f) {
  S c = f.constant_factor();
  int mono = -f.monomial_exponent();
  std::vector<RootFactor<S>> fs;
  for (const auto& g : f.factors()) {
    c *= power(-g.root, g.mult);
    mono -= g.mult;
    fs.push_back({g.root.inverse(), g.mult});
  }
  return FactoredRational<S>(c, mono, fs);
}

}  // namespace detail

// Annihilator for the pair (a(lambda x), b(x)) given one for (a, b): the
// roots divided by lambda, leading coefficient dropped.
template <class S>
FactoredRational<S> rescale_roots(const FactoredRational<S>& p, const S& lambda) {
  std::vector<RootFactor<S>> fs;
  for (const auto& g : p.factors()) fs.push_back({g.root / lambda, g.mult});
  return FactoredRational<S>(S(1), p.monomial_exponent(), fs);
}

// outer(vo) inner(vi) w, exact on the window; region [vo, vi].
template <class S>
FockSeries<S> product_on_window(const FieldOperator<S>& outer, const FieldOperator<S>& inner,
                                const FockVector<S>& w, const Window& win,
                                const VarId& vo = "x1", const VarId& vi = "x2") {
  const Interval wo = win.get(vo), wi = win.get(vi);
  if (wo.hi >= kPosInf || wi.hi >= kPosInf) {
    throw InsufficientWindow("product_on_window needs finite upper bounds");
  }
  FockSeries<S> r({vo, vi}, {vo, vi});
  r.set_box(0, wo);
  r.set_box(1, wi);
  if (w.is_zero()) {
    r.set_support_raw(1, Interval::none());
    return r;
  }
  const long fi = inner.floor(w);
  r.set_support_raw(1, {fi, kPosInf});
  for (long j = std::max(wi.lo, fi); j <= wi.hi; ++j) {
    FockVector<S> v = inner.coefficient(j, w);
    if (v.is_zero()) continue;
    for (long i = std::max(wo.lo, outer.floor(v)); i <= wo.hi; ++i) {
      FockVector<S> u = outer.coefficient(i, v);
      if (!u.is_zero()) r.insert({static_cast<int>(i), static_cast<int>(j)}, u);
    }
  }
  return r;
}

// q(x1/x2) outer(vo) inner(vi) w exactly on the window, where {vo, vi} =
// {x1, x2} and q is a Laurent polynomial.
template <class S>
FockSeries<S> weighted_product(const FactoredRational<S>& q, const VarId& x1, const VarId& x2,
                               const FieldOperator<S>& outer, const VarId& vo,
                               const FieldOperator<S>& inner, const VarId& vi,
                               const FockVector<S>& w, const Window& win) {
  if (!detail::is_laurent_poly(q)) {
    throw NotComputable("weight " + q.to_string() + " is not a Laurent polynomial");
  }
  const long m = q.monomial_exponent(), top = q.degree();
  Window wide;
  wide.set(x1, detail::widen(win.get(x1), -top, -m));
  wide.set(x2, detail::widen(win.get(x2), m, top));
  auto F = product_on_window(outer, inner, w, wide, vo, vi);
  if (q.is_zero()) return F.scaled(S(0)).restricted(win);
  auto P = iota_expand(q, x1, x2, {x1, x2}, Window{});
  return (P * F).restricted(win);
}

// p(x1/x2) a(x1) b(x2) w on the window, with a verdict on whether it lies
// in W((x1, x2)). The bottom `band` columns of x1 must vanish for a
// compatible verdict; a descending staircase entering them is a delta tail.
template <class S>
std::pair<CompatResult, FockSeries<S>> compat_product(const FieldOperator<S>& a,
                                                      const FieldOperator<S>& b,
                                                      const FactoredRational<S>& p,
                                                      const FockVector<S>& w, const Window& win,
                                                      int band, const VarId& x1 = "x1",
                                                      const VarId& x2 = "x2") {
  detail::require_annihilator(p);
  const Interval w1 = win.get(x1), w2 = win.get(x2);
  if (!w1.bounded() || w2.hi >= kPosInf) {
    throw InsufficientWindow("compat_check needs a bounded x1 range and finite x2 top");
  }
  auto G = weighted_product(p, x1, x2, a, x1, b, x2, w, win);
  const int i1 = G.require_index(x1), i2 = G.require_index(x2);
  CompatResult res;
  res.window = win;
  std::vector<std::pair<long, long>> low;  // (j, i) in the band
  long lowest = w1.hi + 1;
  for (const auto& [e, c] : G.terms()) {
    lowest = std::min<long>(lowest, e[i1]);
    if (e[i1] < w1.lo + band) low.push_back({e[i2], e[i1]});
  }
  if (low.empty()) {
    res.verdict = Compat::kCompatibleOnWindow;
    res.bound = lowest;
    return {res, G};
  }
  std::sort(low.begin(), low.end());
  res.verdict = Compat::kUndetermined;
  for (size_t k = 1; k < low.size(); ++k) {
    for (size_t l = 0; l < k; ++l) {
      if (low[l].first < low[k].first && low[l].second > low[k].second) {
        res.verdict = Compat::kIncompatible;
      }
    }
  }
  Exps wit(2);
  wit[i1] = static_cast<int>(low.back().second);
  wit[i2] = static_cast<int>(low.back().first);
  res.witness = wit;
  return {res, G};
}

template <class S>
CompatResult compat_check(const FieldOperator<S>& a, const FieldOperator<S>& b,
                          const FactoredRational<S>& p, const FockVector<S>& w, const Window& win,
                          int band = 2, const VarId& x1 = "x1", const VarId& x2 = "x2") {
  return compat_product(a, b, p, w, win, band, x1, x2).first;
}

// Window on which p(x1/x) a(x1) b(x) w determines the x^d coefficients of
// its substitution x1 = x e^z for d in fw.x.
template <class S>
Window ye_window(const FieldOperator<S>& a, const FieldOperator<S>& b, const FactoredRational<S>& p,
                 const FockVector<S>& w, const FieldWindow& fw) {
  const long jlo = b.floor(w) - p.degree();
  const long L1 = std::min(a.floor(w) + p.monomial_exponent(), jlo) - 2L * fw.margin;
  const long dhi = fw.x.hi;
  Window win;
  win.set("x1", L1, dhi - jlo);
  win.set("x", jlo, dhi - L1);
  return win;
}

namespace detail {

// h[d][k] = [z^k] G(x1 = x e^z, x) at x^d, summing G_{i, d-i} over i in
// irange with d - i >= jlo. Every visited coefficient must be known.
template <class S>
std::map<long, std::vector<FockVector<S>>> substitute(const FockSeries<S>& G, const Interval& d_range,
                                                      const Interval& irange, long jlo, int order) {
  const int i1 = G.require_index("x1"), i2 = G.require_index("x");
  std::vector<Rational> inv_fact(order + 1);
  for (int k = 0; k <= order; ++k) inv_fact[k] = factorial(k).inverse();
  std::map<long, std::vector<FockVector<S>>> h;
  Exps e(2);
  for (long d = d_range.lo; d <= d_range.hi; ++d) {
    auto& row = h[d];
    row.assign(order + 1, FockVector<S>());
    for (long i = irange.lo; i <= std::min(irange.hi, d - jlo); ++i) {
      e[i1] = static_cast<int>(i);
      e[i2] = static_cast<int>(d - i);
      if (!G.known(e)) throw InsufficientWindow("substitution leaves the computed window");
      auto it = G.terms().find(e);
      if (it == G.terms().end()) continue;
      Rational ik(1);
      for (int k = 0; k <= order; ++k) {
        if (k > 0) ik *= Rational(i);
        if (ik.is_zero()) break;
        row[k] += it->second * S(ik * inv_fact[k]);
      }
    }
  }
  return h;
}

// Divides sum_k h[k] z^k by p(e^z) = z^K u(z) and reads off modes
// n = -e - 1 for z^e, e in [-K, zorder].
template <class S>
ModeData<S> divide_by_p(const std::map<long, std::vector<FockVector<S>>>& h,
                        const FactoredRational<S>& p, int zorder, const Interval& d_range,
                        long support_floor) {
  const int K = p.order_at(S(1));
  auto pe = poly_at_exp(p, zorder + 2 * K);
  std::vector<S> u(pe.begin() + K, pe.end());
  auto uinv = ps_inverse(u, zorder + K);
  ModeData<S> md;
  md.k = K;
  md.lowest = -zorder - 1;
  for (int e = -K; e <= zorder; ++e) {
    FockSeries<S> s({"x"});
    s.set_box(0, d_range);
    s.set_support_raw(0, {support_floor, kPosInf});
    for (const auto& [d, row] : h) {
      FockVector<S> acc;
      for (int k = 0; k <= e + K; ++k) {
        if (row[k].is_zero() || uinv[e + K - k].is_zero()) continue;
        acc += row[k] * uinv[e + K - k];
      }
      if (!acc.is_zero() && d >= support_floor) s.insert({static_cast<int>(d)}, acc);
    }
    md.modes.emplace(-e - 1, std::move(s));
  }
  return md;
}

}  // namespace detail

// Y_E^e(a, z) b(x) w = p(e^z)^{-1} (p(x1/x) a(x1) b(x) w)|_{x1 = x e^z}, as
// mode data for n >= -zorder - 1 on the x exponents fw.x.
template <class S>
ModeData<S> ye_product(const FieldOperator<S>& a, const FieldOperator<S>& b,
                       const FactoredRational<S>& p, const FockVector<S>& w, int zorder,
                       const FieldWindow& fw) {
  detail::require_annihilator(p);
  if (!fw.x.bounded()) throw InsufficientWindow("ye_product needs a bounded x range");
  const Window win = ye_window(a, b, p, w, fw);
  auto [cr, G] = compat_product(a, b, p, w, win, fw.margin, "x1", "x");
  if (cr.verdict == Compat::kIncompatible) {
    throw IncompatibleFields(a.describe() + ", " + b.describe() + " with p = " + p.to_string());
  }
  if (cr.verdict == Compat::kUndetermined) {
    throw InsufficientWindow("compatibility undetermined on " + win.get("x1").to_string());
  }
  const long jlo = win.get("x").lo;
  const int K = p.order_at(S(1));
  auto h = detail::substitute(G, fw.x, {cr.bound, kPosInf}, jlo, zorder + K);
  return detail::divide_by_p(h, p, zorder, fw.x, cr.bound + jlo);
}

template <class S>
struct ResidueResult {
  ModeData<S> modes;
  FockSeries<S> top;  // a_{k-1}^e b from the closed form
};

// The residue formula: p(e^z) Y_E^e(a, z) b(x) at x^d equals
// sum_{i >= 0} G_{i, d-i} e^{iz} + sum_{i < 0} K_{i, d-i} e^{iz}, where G is
// p(x1/x) a(x1) b(x) w and K the twisted reversed product. L.a and L.b are
// the pair.
template <class S>
ResidueResult<S> residue_ye(const LocalityDatum<S>& L, const FockVector<S>& w, int zorder,
                            const FieldWindow& fw) {
  const auto& p = L.p;
  detail::require_annihilator(p);
  if (!fw.x.bounded()) throw InsufficientWindow("residue_ye needs a bounded x range");
  const int K = p.order_at(S(1));
  const int order = zorder + K;
  const long dlo = fw.x.lo, dhi = fw.x.hi;

  const long jlo = L.b.floor(w) - p.degree();
  Window gw;
  gw.set("x1", 0, std::max(0L, dhi - jlo));
  gw.set("x", jlo, dhi);
  auto G = weighted_product(p, "x1", "x", L.a, "x1", L.b, "x", w, gw);
  auto h = detail::substitute(G, fw.x, {0, kPosInf}, jlo, order);

  for (const auto& pt : L.partners) {
    const auto q = p * detail::reflect(pt.f);
    const long klo = pt.a.floor(w) + q.monomial_exponent();
    if (klo > -1) continue;
    Window kw;
    kw.set("x1", klo, -1);
    kw.set("x", dlo + 1, dhi - klo);
    auto Kser = weighted_product(q, "x1", "x", pt.b, "x", pt.a, "x1", w, kw);
    auto hk = detail::substitute(Kser, fw.x, {klo, -1}, kNegInf, order);
    for (auto& [d, row] : hk)
      for (int k = 0; k <= order; ++k) h[d][k] += row[k];
  }

  ResidueResult<S> out;
  out.modes = detail::divide_by_p(h, p, zorder, fw.x, kNegInf);
  FockSeries<S> top({"x"});
  top.set_box(0, fw.x);
  const S c = p.taylor_at_one(K);
  for (const auto& [d, row] : h) {
    if (!row[0].is_zero()) top.insert({static_cast<int>(d)}, row[0] * c.inverse());
  }
  out.top = std::move(top);
  return out;
}

// Result of a window comparison; the counterexample is an exponent vector
// in the order of `vars`.
struct WindowCheck {
  bool holds = false;
  std::vector<VarId> vars;
  std::optional<Exps> counterexample;
  std::string difference;  // left minus right at the counterexample
  std::string note;
};

namespace detail {

template <class S>
FockSeries<S> renamed(const FockSeries<S>& s, const VarId& v) {
  check_invariant(s.nvars() == 1, "renamed: one-variable series expected");
  FockSeries<S> r({v});
  r.set_box(0, s.box(0));
  r.set_support_raw(0, s.support(0));
  for (const auto& [e, c] : s.terms()) r.insert(e, c);
  return r;
}

template <class S>
WindowCheck compare(const FockSeries<S>& a, const FockSeries<S>& b) {
  WindowCheck r;
  r.vars = a.vars();
  auto diff = first_difference(a.aligned(r.vars), b.aligned(r.vars));
  r.holds = !diff.has_value();
  r.counterexample = diff;
  if (diff) {
    const auto& e = *diff;
    const auto x = a.known(e) ? a.coeff(e) : FockVector<S>();
    const auto y = b.known(e) ? b.coeff(e) : FockVector<S>();
    r.difference = (x - y).to_string();
  }
  return r;
}

inline void require_nonempty(const Window& win, const VarId& x1, const VarId& x2) {
  if (win.get(x1).empty() || win.get(x2).empty()) throw InsufficientWindow("empty window");
  if (win.get(x1).hi >= kPosInf || win.get(x2).hi >= kPosInf) {
    throw InsufficientWindow("window must be bounded above");
  }
}

}  // namespace detail

// sum_i iota_{x2,x1}(q_i(x1/x2)) b_i(x2) a_i(x1) w with q_i = p(s) f_i(1/s).
template <class S>
FockSeries<S> twisted_reversed(const LocalityDatum<S>& L, const FactoredRational<S>& p,
                               const FockVector<S>& w, const Window& win) {
  FockSeries<S> r({"x2", "x1"}, {"x2", "x1"});
  r.set_box(0, win.get("x2"));
  r.set_box(1, win.get("x1"));
  r.set_support_raw(0, Interval::none());
  for (const auto& pt : L.partners) {
    const auto q = p * detail::reflect(pt.f);
    r = r + weighted_product(q, "x1", "x2", pt.b, "x2", pt.a, "x1", w, win);
  }
  return r;
}

template <class S>
WindowCheck locality_check_detail(const LocalityDatum<S>& L, const FockVector<S>& w,
                                  const Window& win) {
  detail::require_nonempty(win, "x1", "x2");
  detail::require_annihilator(L.p);
  auto lhs = weighted_product(L.p, "x1", "x2", L.a, "x1", L.b, "x2", w, win);
  auto rhs = twisted_reversed(L, L.p, w, win);
  return detail::compare(lhs.with_region({}), rhs.with_region({}));
}

template <class S>
bool locality_check(const LocalityDatum<S>& L, const FockVector<S>& w, const Window& win) {
  return locality_check_detail(L, w, win).holds;
}

// a(x1) b(x2) w - sum_i iota_{x2,x1}(f_i(x2/x1)) b_i(x2) a_i(x1) w.
template <class S>
FockSeries<S> locality_defect(const LocalityDatum<S>& L, const FockVector<S>& w, const Window& win) {
  detail::require_nonempty(win, "x1", "x2");
  auto ab = product_on_window(L.a, L.b, w, win, "x1", "x2");
  auto rev = twisted_reversed(L, FactoredRational<S>::one(), w, win);
  return ab.with_region({}) - rev.with_region({}).aligned({"x1", "x2"});
}

template <class S>
struct ScaledModeEntry {
  S lambda;
  int j = 0;
  FockSeries<S> fitted;  // j! times the delta coefficient
  FockSeries<S> mode;    // a(lambda x)_j^e b(x) w
  bool equal = false;
};

template <class S>
struct ScaledModeResult {
  std::vector<DeltaTerm<S, FockVector<S>>> fit;
  std::vector<ScaledModeEntry<S>> entries;
  bool all_equal = true;
};

// Fits the locality defect as a delta sum over `lambdas` and compares each
// coefficient with the mode product of the rescaled field.
template <class S>
ScaledModeResult<S> scaled_mode_extract(const LocalityDatum<S>& L, const std::vector<S>& lambdas,
                                        int jmax, const FockVector<S>& w, const Window& win,
                                        const FieldWindow& fw) {
  ScaledModeResult<S> out;
  auto D = locality_defect(L, w, win);
  out.fit = delta_fit(D, lambdas, jmax, "x1", "x2");
  std::vector<S> roots;
  for (const auto& l : lambdas)
    for (int k = 0; k <= jmax; ++k) roots.push_back(l);
  const auto p_all = FactoredRational<S>::from_roots(roots);
  for (const auto& lambda : lambdas) {
    const auto md = ye_product(L.a.scaled(lambda), L.b, rescale_roots(p_all, lambda), w, 0, fw);
    for (int j = 0; j <= jmax; ++j) {
      ScaledModeEntry<S> e{lambda, j, FockSeries<S>({"x"}), md.mode(j), false};
      e.fitted.set_box(0, fw.x);
      for (const auto& t : out.fit) {
        if (t.lambda == lambda && t.j == j) {
          e.fitted = detail::renamed(t.coeff, "x").scaled(S(factorial(j)));
        }
      }
      if (e.fitted.box(0).intersect(e.mode.box(0)).empty()) {
        throw InsufficientWindow("fitted range and mode range do not overlap");
      }
      e.equal = !first_difference(e.fitted, e.mode).has_value();
      out.all_equal = out.all_equal && e.equal;
      out.entries.push_back(std::move(e));
    }
  }
  return out;
}

template <class S>
struct CommutatorResult {
  WindowCheck check;
  std::vector<int> contributing;  // group elements g with a delta term
  FockSeries<S> lhs{std::vector<VarId>{"x1", "x2"}};
  FockSeries<S> rhs{std::vector<VarId>{"x1", "x2"}};
};

// Compares the locality defect of (Y_W(e^{(ru)}), Y_W(e^{(rv)})) with
//   sum_g sum_j (1/j!) Y_W((g u)_j v, x2) (x2 d/dx2)^j delta(chi(g) x2 / x1),
// g ranging over shifts keeping ru + g in C's flavor window. Y_W(g u) is
// the realized field of flavor ru + g; its modes against v come from
// ye_product with L.p's roots divided by chi(g).
template <class S>
CommutatorResult<S> commutator_formula_check(const CovariantStructure<S>& C, int ru, int rv,
                                             const LocalityDatum<S>& L, const FockVector<S>& w,
                                             const Window& win, int margin = 4) {
  C.check_flavor(ru);
  C.check_flavor(rv);
  detail::require_nonempty(win, "x1", "x2");
  const Interval w1 = win.get("x1"), w2 = win.get("x2");
  if (!w1.bounded() || !w2.bounded()) throw InsufficientWindow("commutator check needs a finite window");
  std::vector<S> seen;
  for (int g = C.flavor_lo - ru; g <= C.flavor_hi - ru; ++g) {
    S c = C.chi(g);
    for (const auto& s : seen)
      if (s == c) throw ConfigError("character is not injective on the group window");
    seen.push_back(c);
  }

  CommutatorResult<S> out;
  out.lhs = locality_defect(L, w, win);
  FockSeries<S> rhs({"x1", "x2"});
  rhs.set_box(0, w1);
  rhs.set_box(1, w2);
  FieldWindow fw{{w1.lo + w2.lo, w1.hi + w2.hi}, margin};
  const FieldOperator<S> v = C.field(rv);
  for (int g = C.flavor_lo - ru; g <= C.flavor_hi - ru; ++g) {
    const S lambda = C.chi(g);
    const auto pg = rescale_roots(L.p, lambda);
    const int k = pg.order_at(S(1));
    if (k == 0) continue;
    out.contributing.push_back(g);
    ModeData<S> md;
    try {
      md = ye_product(C.field(ru + g), v, pg, w, 0, fw);
    } catch (const IncompatibleFields& e) {
      out.check.vars = {"x1", "x2"};
      out.check.note = std::string("realized field of g = ") + std::to_string(g) +
                       " is not compatible: " + e.what();
      out.rhs = rhs;
      return out;
    }
    for (int j = 0; j < k; ++j) {
      auto A = detail::renamed(md.mode(j), "x2").scaled(S(factorial(j).inverse()));
      rhs = rhs + delta_expand(DeltaTerm<S, FockVector<S>>{lambda, j, A}, win, "x1", "x2");
    }
  }
  out.rhs = rhs;
  out.check = detail::compare(out.lhs, out.rhs);
  return out;
}

// p(e^z) Y_W(Y(u, z) v, x) w against (p(x1/x) u(x1) v(x) w)|_{x1 = x e^z}
// through z^zorder. The left side's modes come from ye_product with
// p_inner, which may differ from p.
template <class S>
WindowCheck assoc_check(const FieldOperator<S>& u, const FieldOperator<S>& v,
                        const FactoredRational<S>& p, const FockVector<S>& w, int zorder,
                        const FieldWindow& fw,
                        std::optional<std::type_identity_t<FactoredRational<S>>> p_inner = {}) {
  const auto& pin = p_inner ? *p_inner : p;
  const ModeData<S> Y = ye_product(u, v, pin, w, zorder, fw);

  const Window win = ye_window(u, v, p, w, fw);
  auto [cr, G] = compat_product(u, v, p, w, win, fw.margin, "x1", "x");
  if (cr.verdict == Compat::kIncompatible) {
    throw IncompatibleFields(u.describe() + ", " + v.describe() + " with p = " + p.to_string());
  }
  if (cr.verdict == Compat::kUndetermined) throw InsufficientWindow("compatibility undetermined");
  auto h = detail::substitute(G, fw.x, {cr.bound, kPosInf}, win.get("x").lo, zorder);

  const auto pe = poly_at_exp(p, zorder + Y.k);
  WindowCheck r;
  r.vars = {"x", "z"};
  for (int e = -Y.k; e <= zorder; ++e) {
    std::vector<FockSeries<S>> terms;
    for (int k = 0; k <= e + Y.k; ++k) terms.push_back(Y.mode(-(e - k) - 1));
    for (long d = fw.x.lo; d <= fw.x.hi; ++d) {
      FockVector<S> lhs;
      for (int k = 0; k <= e + Y.k; ++k) {
        if (pe[k].is_zero()) continue;
        lhs += terms[k].coeff({static_cast<int>(d)}) * pe[k];
      }
      FockVector<S> rhs = e >= 0 ? h[d][e] : FockVector<S>();
      if (!(lhs == rhs)) {
        r.counterexample = Exps{static_cast<int>(d), e};
        r.difference = (lhs - rhs).to_string();
        return r;
      }
    }
  }
  r.holds = true;
  return r;
}

// Y_W(e^{(r+n)}, x) = Y_W(e^{(r)}, chi(n) x) on every basis vector of grade
// <= N, coefficient-wise on xwin. The counterexample is (basis index, exponent).
template <class S>
WindowCheck covariance_check(const CovariantStructure<S>& C, int r, int n, int N,
                             const Interval& xwin) {
  C.check_flavor(r);
  C.check_flavor(r + n);
  const auto a = C.field(r + n);
  const auto b = C.field(r).scaled(C.chi(n));
  const auto basis = a.module().basis(N);
  WindowCheck out;
  out.vars = {"basis", "x"};
  for (size_t k = 0; k < basis.size(); ++k) {
    const auto w = FockVector<S>::basis(basis[k]);
    const auto sa = a.apply(w, xwin), sb = b.apply(w, xwin);
    auto diff = first_difference(sa, sb);
    if (diff) {
      out.counterexample = Exps{static_cast<int>(k), (*diff)[0]};
      out.difference = (sa.coeff(*diff) - sb.coeff(*diff)).to_string();
      return out;
    }
  }
  out.holds = true;
  return out;
}

// Smallest-degree product of (x - chi(g))^{k_g}, k_g <= 2, making
// (Y_W(e^{(ru)}), Y_W(e^{(rv)})) compatible on every vector of `ws`. With
// `extended`, roots -chi(g) are admitted as well.
template <class S>
std::optional<FactoredRational<S>> find_annihilator(const CovariantStructure<S>& C, int ru, int rv,
                                                    const std::vector<FockVector<S>>& ws,
                                                    const FieldWindow& fw, int max_degree = 2,
                                                    bool extended = false) {
  C.check_flavor(ru);
  C.check_flavor(rv);
  const auto u = C.field(ru), v = C.field(rv);
  std::vector<S> roots;
  for (int g = -C.group_span(); g <= C.group_span(); ++g) roots.push_back(C.chi(g));
  if (extended) {
    for (int g = -C.group_span(); g <= C.group_span(); ++g) roots.push_back(-C.chi(g));
  }
  auto works = [&](const FactoredRational<S>& p) {
    for (const auto& w : ws) {
      auto cr = compat_check(u, v, p, w, ye_window(u, v, p, w, fw), fw.margin, "x1", "x");
      if (cr.verdict != Compat::kCompatibleOnWindow) return false;
    }
    return true;
  };
  std::vector<int> mult(roots.size(), 0);
  std::optional<FactoredRational<S>> found;
  std::function<void(size_t, int)> search = [&](size_t from, int left) {
    if (found) return;
    if (left == 0) {
      std::vector<RootFactor<S>> fs;
      for (size_t i = 0; i < roots.size(); ++i)
        if (mult[i] > 0) fs.push_back({roots[i], mult[i]});
      FactoredRational<S> p(S(1), 0, fs);
      if (works(p)) found = p;
      return;
    }
    for (size_t i = from; i < roots.size() && !found; ++i) {
      for (int k = 1; k <= std::min(2, left) && !found; ++k) {
        mult[i] = k;
        search(i + 1, left - k);
        mult[i] = 0;
      }
    }
  };
  for (int d = 0; d <= max_degree && !found; ++d) search(0, d);
  return found;
}

}  // namespace phiq
