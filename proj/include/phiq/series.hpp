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
#include <climits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phiq/errors.hpp"
#include "phiq/rational.hpp"

namespace phiq {

using VarId = std::string;
// Expansion order, outermost variable first. Empty means two-sided data with
// no expansion direction (Laurent polynomials, delta expansions).
using RegionTag = std::vector<VarId>;
using Exps = std::vector<int>;

inline constexpr long kNegInf = LONG_MIN / 4;
inline constexpr long kPosInf = LONG_MAX / 4;

inline long ext_add(long a, long b) {
  bool neg = a <= kNegInf || b <= kNegInf;
  bool pos = a >= kPosInf || b >= kPosInf;
  check_invariant(!(neg && pos), "ext_add: -inf + +inf");
  if (neg) return kNegInf;
  if (pos) return kPosInf;
  return a + b;
}

// Closed interval of exponents with -inf/+inf sentinels.
struct Interval {
  long lo = kNegInf;
  long hi = kPosInf;

  static Interval all() { return {}; }
  static Interval none() { return {kPosInf, kNegInf}; }
  static Interval point(long e) { return {e, e}; }
  bool empty() const { return lo > hi; }
  bool contains(long e) const { return lo <= e && e <= hi; }
  bool is_all() const { return lo <= kNegInf && hi >= kPosInf; }
  bool bounded() const { return lo > kNegInf && hi < kPosInf; }
  Interval intersect(const Interval& o) const {
    return {std::max(lo, o.lo), std::min(hi, o.hi)};
  }
  Interval hull(const Interval& o) const {
    if (empty()) return o;
    if (o.empty()) return *this;
    return {std::min(lo, o.lo), std::max(hi, o.hi)};
  }
  friend bool operator==(const Interval&, const Interval&) = default;
  std::string to_string() const {
    auto b = [](long v) {
      if (v <= kNegInf) return std::string("-inf");
      if (v >= kPosInf) return std::string("+inf");
      return std::to_string(v);
    };
    return "[" + b(lo) + "," + b(hi) + "]";
  }
};

// Per-variable exponent ranges; variables not mentioned are unbounded.
class Window {
 public:
  Window() = default;
  Window(std::initializer_list<std::pair<const VarId, Interval>> init) : r_(init) {}
  Window& set(const VarId& v, long lo, long hi) {
    r_[v] = Interval{lo, hi};
    return *this;
  }
  Window& set(const VarId& v, Interval i) {
    r_[v] = i;
    return *this;
  }
  Interval get(const VarId& v) const {
    auto it = r_.find(v);
    return it == r_.end() ? Interval::all() : it->second;
  }
  const std::map<VarId, Interval>& ranges() const { return r_; }

 private:
  std::map<VarId, Interval> r_;
};

// Sparse multivariate Laurent series known on a box.
//
// Each variable v carries a box [lo, hi]: every coefficient whose exponent
// vector lies in the product of boxes is known (stored if nonzero). Each
// variable also carries a support interval [floor, ceil] asserting that all
// coefficients with v-exponent outside it vanish, known or not. A
// coefficient is known if it lies in the box or outside the support.
// Products compute the largest box on which every contributing term of
// both inputs is known.
template <class C>
class Series {
 public:
  using Terms = std::map<Exps, C>;

  Series() = default;
  // All-known zero series; insert() adds terms, all coefficients remain known.
  explicit Series(std::vector<VarId> vars, RegionTag region = {})
      : vars_(std::move(vars)),
        region_(std::move(region)),
        box_(vars_.size(), Interval::all()),
        supp_(vars_.size(), Interval::all()) {}

  // Laurent polynomial from terms; support is the hull of the terms.
  static Series polynomial(std::vector<VarId> vars, const Terms& terms, RegionTag region = {}) {
    Series s(std::move(vars), std::move(region));
    for (const auto& [e, c] : terms) s.insert(e, c);
    s.tighten_support();
    return s;
  }
  static Series constant(std::vector<VarId> vars, const C& c) {
    Exps zero(vars.size(), 0);
    return polynomial(std::move(vars), Terms{{zero, c}});
  }

  const std::vector<VarId>& vars() const { return vars_; }
  const RegionTag& region() const { return region_; }
  const Terms& terms() const { return terms_; }
  size_t nvars() const { return vars_.size(); }
  bool empty_terms() const { return terms_.empty(); }

  int index_of(const VarId& v) const {
    for (size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == v) return static_cast<int>(i);
    return -1;
  }
  int require_index(const VarId& v) const {
    int i = index_of(v);
    if (i < 0) throw LogicFailure("series has no variable " + v);
    return i;
  }

  const Interval& box(size_t i) const { return box_[i]; }
  const Interval& support(size_t i) const { return supp_[i]; }
  Interval box(const VarId& v) const { return box_[require_index(v)]; }
  Interval support(const VarId& v) const { return supp_[require_index(v)]; }
  Window window() const {
    Window w;
    for (size_t i = 0; i < vars_.size(); ++i) w.set(vars_[i], box_[i]);
    return w;
  }

  bool in_box(const Exps& e) const {
    for (size_t i = 0; i < e.size(); ++i)
      if (!box_[i].contains(e[i])) return false;
    return true;
  }
  bool outside_support(const Exps& e) const {
    for (size_t i = 0; i < e.size(); ++i)
      if (!supp_[i].contains(e[i])) return true;
    return false;
  }
  bool known(const Exps& e) const { return in_box(e) || outside_support(e); }
  bool all_known() const {
    for (size_t i = 0; i < vars_.size(); ++i)
      if (!box_[i].is_all() && !supp_[i].empty()) return false;
    return true;
  }

  C coeff(const Exps& e) const {
    if (!known(e)) throw OutsideWindow("coefficient outside the known window");
    auto it = terms_.find(e);
    return it == terms_.end() ? C() : it->second;
  }

  // Accumulates c at e. e must be inside both the box and the support.
  void insert(const Exps& e, const C& c) {
    check_invariant(e.size() == vars_.size(), "insert: exponent arity");
    if (c.is_zero()) return;
    if (!in_box(e) || outside_support(e)) {
      throw OutsideWindow("insert outside box or declared support");
    }
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (!fresh) {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  // Declares that coefficients with var-exponent outside `s` vanish.
  Series& declare_support(const VarId& v, Interval s) {
    int i = require_index(v);
    supp_[i] = supp_[i].intersect(s);
    for (const auto& [e, c] : terms_) {
      check_invariant(supp_[i].contains(e[i]), "declared support excludes a stored term");
    }
    return *this;
  }
  Series& declare_support(size_t i, Interval s) { return declare_support(vars_[i], s); }

  // Sets the support to the hull of the stored terms. Valid only when every
  // coefficient is known.
  void tighten_support() {
    check_invariant(all_known() || std::all_of(box_.begin(), box_.end(),
                                               [](const Interval& b) { return b.is_all(); }),
                    "tighten_support on a truncated series");
    for (size_t i = 0; i < vars_.size(); ++i) {
      Interval h = Interval::none();
      for (const auto& [e, c] : terms_) h = h.hull(Interval::point(e[i]));
      supp_[i] = h;
    }
  }

  Series restricted(const Window& w) const {
    Series r = *this;
    for (size_t i = 0; i < vars_.size(); ++i) r.box_[i] = box_[i].intersect(w.get(vars_[i]));
    r.drop_outside_box();
    return r;
  }
  Series restricted(const VarId& v, Interval iv) const {
    Window w;
    w.set(v, iv);
    return restricted(w);
  }

  Series with_region(RegionTag r) const {
    Series s = *this;
    s.region_ = std::move(r);
    return s;
  }

  // Re-indexes onto `vars` (a superset of the current variables). Absent
  // variables get a full box and support {0}.
  Series aligned(const std::vector<VarId>& vars) const {
    if (vars == vars_) return *this;
    Series r;
    r.vars_ = vars;
    r.region_ = region_;
    r.box_.assign(vars.size(), Interval::all());
    r.supp_.assign(vars.size(), Interval::point(0));
    std::vector<int> map(vars_.size());
    for (size_t i = 0; i < vars_.size(); ++i) {
      auto it = std::find(vars.begin(), vars.end(), vars_[i]);
      check_invariant(it != vars.end(), "aligned: target lacks a variable");
      size_t j = static_cast<size_t>(it - vars.begin());
      map[i] = static_cast<int>(j);
      r.box_[j] = box_[i];
      r.supp_[j] = supp_[i];
    }
    for (const auto& [e, c] : terms_) {
      Exps f(vars.size(), 0);
      for (size_t i = 0; i < e.size(); ++i) f[map[i]] = e[i];
      r.terms_.emplace(std::move(f), c);
    }
    return r;
  }

  // Multiplies every coefficient by a scalar on the right.
  template <class S>
  Series scaled(const S& s) const {
    Series r = *this;
    r.terms_.clear();
    for (const auto& [e, c] : terms_) {
      C v = c * s;
      if (!v.is_zero()) r.terms_.emplace(e, std::move(v));
    }
    return r;
  }

  // Applies f to each coefficient (f must map zero to zero).
  template <class F>
  auto mapped(F f) const {
    using D = decltype(f(std::declval<const C&>()));
    Series<D> r(vars_, region_);
    r.adopt_shape(*this);
    for (const auto& [e, c] : terms_) {
      D v = f(c);
      if (!v.is_zero()) r.raw_terms().emplace(e, std::move(v));
    }
    return r;
  }

  Series operator-() const {
    Series r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }
  friend Series operator+(const Series& a, const Series& b) { return combine(a, b, false); }
  friend Series operator-(const Series& a, const Series& b) { return combine(a, b, true); }

  // Internal access for builders in this library.
  Terms& raw_terms() { return terms_; }
  template <class D>
  void adopt_shape(const Series<D>& o) {
    vars_ = o.vars();
    region_ = o.region();
    box_.resize(vars_.size());
    supp_.resize(vars_.size());
    for (size_t i = 0; i < vars_.size(); ++i) {
      box_[i] = o.box(i);
      supp_[i] = o.support(i);
    }
  }
  void set_box(size_t i, Interval b) { box_[i] = b; }
  void set_support_raw(size_t i, Interval s) { supp_[i] = s; }
  void set_region(RegionTag r) { region_ = std::move(r); }
  void drop_outside_box() {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (!in_box(it->first)) it = terms_.erase(it);
      else ++it;
    }
  }

 private:
  static Series combine(const Series& a0, const Series& b0, bool subtract) {
    RegionTag region = merge_regions(a0.region_, b0.region_);
    std::vector<VarId> vars = union_vars(a0.vars_, b0.vars_);
    Series a = a0.aligned(vars);
    Series b = b0.aligned(vars);
    Series r(vars, region);
    for (size_t i = 0; i < vars.size(); ++i) {
      // Known in the sum: known in both. Approximate the union-of-regions
      // knowledge by a box: intersect the boxes, except where one side's
      // support lies entirely inside the other's box.
      r.supp_[i] = a.supp_[i].hull(b.supp_[i]);
      r.box_[i] = a.box_[i].intersect(b.box_[i]);
      if (a.supp_[i].empty()) r.box_[i] = b.box_[i];
      if (b.supp_[i].empty()) r.box_[i] = a.box_[i];
    }
    r.terms_ = a.terms_;
    for (const auto& [e, c] : b.terms_) {
      auto [it, fresh] = r.terms_.try_emplace(e, subtract ? -c : c);
      if (!fresh) {
        it->second = subtract ? it->second - c : it->second + c;
        if (it->second.is_zero()) r.terms_.erase(it);
      }
    }
    r.drop_outside_box();
    return r;
  }

 public:
  static RegionTag merge_regions(const RegionTag& a, const RegionTag& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (a != b) throw LogicFailure("incompatible expansion regions");
    return a;
  }
  static std::vector<VarId> union_vars(const std::vector<VarId>& a, const std::vector<VarId>& b) {
    std::vector<VarId> r = a;
    for (const auto& v : b)
      if (std::find(r.begin(), r.end(), v) == r.end()) r.push_back(v);
    return r;
  }

 private:
  std::vector<VarId> vars_;
  RegionTag region_;
  std::vector<Interval> box_;
  std::vector<Interval> supp_;
  Terms terms_;
};

// Whether, for each fixed output exponent, only finitely many splits
// e = a + b with a, b in the supports exist.
inline bool finite_splits(const Interval& suppA, const Interval& suppB) {
  return !((suppA.lo <= kNegInf && suppB.hi >= kPosInf) ||
           (suppA.hi >= kPosInf && suppB.lo <= kNegInf));
}

// Output box of a product in one variable: the exponents e for which every
// split e = a + b that can contribute has a in A's box and b in B's box.
// A split can contribute only if a lies in A's support and b in B's.
// Requires finite_splits().
inline Interval product_box(const Interval& boxA, const Interval& suppA, const Interval& boxB,
                            const Interval& suppB) {
  const long fa = suppA.lo, ca = suppA.hi, fb = suppB.lo, cb = suppB.hi;
  // The split range for fixed e is [max(fa, e - cb), min(ca, e - fb)].
  check_invariant(finite_splits(suppA, suppB), "product_box: infinite split range");
  long lo = kNegInf;
  long hi = kPosInf;
  if (fa < boxA.lo) lo = std::max(lo, ext_add(boxA.lo, cb));
  if (fb < boxB.lo) lo = std::max(lo, ext_add(boxB.lo, ca));
  if (ca > boxA.hi) hi = std::min(hi, ext_add(boxA.hi, fb));
  if (cb > boxB.hi) hi = std::min(hi, ext_add(boxB.hi, fa));
  return {lo, hi};
}

template <class A, class B>
auto operator*(const Series<A>& a0, const Series<B>& b0) {
  using R = decltype(std::declval<A>() * std::declval<B>());
  RegionTag region = Series<A>::merge_regions(a0.region(), b0.region());
  std::vector<VarId> vars = Series<A>::union_vars(a0.vars(), b0.vars());
  Series<A> a = a0.aligned(vars);
  Series<B> b = b0.aligned(vars);
  Series<R> r(vars, region);
  bool zero = false;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (a.support(i).empty() || b.support(i).empty()) zero = true;
  }
  if (zero) {
    for (size_t i = 0; i < vars.size(); ++i) r.set_support_raw(i, Interval::none());
    return r;
  }
  for (size_t i = 0; i < vars.size(); ++i) {
    Interval s{ext_add(a.support(i).lo, b.support(i).lo), ext_add(a.support(i).hi, b.support(i).hi)};
    if (!finite_splits(a.support(i), b.support(i))) {
      throw NotComputable("product coefficients are infinite sums in " + vars[i]);
    }
    Interval bx = product_box(a.box(i), a.support(i), b.box(i), b.support(i));
    r.set_support_raw(i, s);
    r.set_box(i, bx);
  }
  auto& out = r.raw_terms();
  Exps e(vars.size());
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      if (!r.in_box(e)) continue;
      R v = ca * cb;
      auto [it, fresh] = out.try_emplace(e, v);
      if (!fresh) it->second = it->second + v;
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second.is_zero()) it = out.erase(it);
    else ++it;
  }
  return r;
}

// First exponent (in the common known region) where a and b differ, if any.
template <class C>
std::optional<Exps> first_difference(const Series<C>& a0, const Series<C>& b0) {
  std::vector<VarId> vars = Series<C>::union_vars(a0.vars(), b0.vars());
  Series<C> a = a0.aligned(vars);
  Series<C> b = b0.aligned(vars);
  for (const auto& [e, c] : a.terms()) {
    if (!b.known(e)) continue;
    auto it = b.terms().find(e);
    if (it == b.terms().end() || !(it->second == c)) return e;
  }
  for (const auto& [e, c] : b.terms()) {
    if (!a.known(e)) continue;
    if (a.terms().find(e) == a.terms().end()) return e;
  }
  return std::nullopt;
}

template <class C>
bool equal_on_window(const Series<C>& a, const Series<C>& b) {
  return !first_difference(a, b).has_value();
}

// x_v -> lambda x_v: the coefficient at e is multiplied by lambda^{e_v}.
template <class C, class S>
Series<C> rescale_var(const Series<C>& s, const VarId& v, const S& lambda) {
  int i = s.require_index(v);
  Series<C> r = s;
  for (auto& [e, c] : r.raw_terms()) c = c * power(lambda, e[i]);
  return r;
}

// Multiplies by the monomial prod x_i^{shift_i}.
template <class C>
Series<C> shifted(const Series<C>& s, const Exps& shift) {
  Series<C> r(s.vars(), s.region());
  r.adopt_shape(s);
  for (size_t i = 0; i < s.nvars(); ++i) {
    auto mv = [&](const Interval& iv) {
      if (iv.empty()) return iv;
      return Interval{ext_add(iv.lo, shift[i]), ext_add(iv.hi, shift[i])};
    };
    r.set_box(i, mv(s.box(i)));
    r.set_support_raw(i, mv(s.support(i)));
  }
  for (const auto& [e, c] : s.terms()) {
    Exps f = e;
    for (size_t i = 0; i < f.size(); ++i) f[i] += shift[i];
    r.raw_terms().emplace(std::move(f), c);
  }
  return r;
}

// Laurent polynomials are series with every coefficient known.
template <class S>
using LaurentPoly = Series<S>;

}  // namespace phiq
