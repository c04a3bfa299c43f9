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
#include <string>
#include <utility>
#include <vector>

#include "phiq/errors.hpp"
#include "phiq/scalar.hpp"
#include "phiq/series.hpp"

namespace phiq {

// A mode generator a^{(flavor)}_{mode}.
struct Generator {
  int flavor = 0;
  int mode = 0;
  friend bool operator==(const Generator&, const Generator&) = default;
};

// Creation monomials are ordered by flavor ascending, then mode descending.
inline bool gen_less(const Generator& a, const Generator& b) {
  if (a.flavor != b.flavor) return a.flavor < b.flavor;
  return a.mode > b.mode;
}

struct Monomial {
  std::vector<Generator> gens;
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend bool operator<(const Monomial& a, const Monomial& b) {
    if (a.gens.size() != b.gens.size()) return a.gens.size() < b.gens.size();
    for (size_t i = 0; i < a.gens.size(); ++i) {
      if (a.gens[i] == b.gens[i]) continue;
      return gen_less(a.gens[i], b.gens[i]);
    }
    return false;
  }
  std::string to_string() const {
    std::string s = "[";
    for (size_t i = 0; i < gens.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(gens[i].flavor) + ":" + std::to_string(gens[i].mode);
    }
    return s + "]";
  }
};

// Finite linear combination of creation monomials applied to the vacuum.
template <class S>
class FockVector {
 public:
  using Terms = std::map<Monomial, S>;
  FockVector() = default;
  static FockVector vacuum() { return basis(Monomial{}); }
  static FockVector basis(const Monomial& m, const S& c = S(1)) {
    FockVector v;
    if (!c.is_zero()) v.t_.emplace(m, c);
    return v;
  }

  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  S coeff(const Monomial& m) const {
    auto it = t_.find(m);
    return it == t_.end() ? S(0) : it->second;
  }
  void add(const Monomial& m, const S& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = t_.try_emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  FockVector& operator+=(const FockVector& o) {
    for (const auto& [m, c] : o.t_) add(m, c);
    return *this;
  }
  FockVector& operator-=(const FockVector& o) {
    for (const auto& [m, c] : o.t_) add(m, -c);
    return *this;
  }
  friend FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
  friend FockVector operator-(FockVector a, const FockVector& b) { return a -= b; }
  friend FockVector operator-(FockVector a) {
    for (auto& [m, c] : a.t_) c = -c;
    return a;
  }
  friend FockVector operator*(const FockVector& v, const S& s) {
    FockVector r;
    if (s.is_zero()) return r;
    for (const auto& [m, c] : v.t_) r.t_.emplace(m, c * s);
    return r;
  }
  friend FockVector operator*(const S& s, const FockVector& v) { return v * s; }
  friend bool operator==(const FockVector&, const FockVector&) = default;

  std::string to_string() const {
    if (t_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : t_) {
      if (!s.empty()) s += " + ";
      s += "(" + phiq::to_string(c) + ")" + m.to_string();
    }
    return s;
  }

 private:
  Terms t_;
};

// Generalized CAR pairing data.
//   kT: one flavor (0), {T_m, T_n} = 2(p^m + p^{-m}) delta_{m+n,0},
//       creators n <= 0, fields T(x) = sum T_n x^{-n}; T_0^2 = 2.
//   kE: flavors in [flavor_lo, flavor_hi],
//       {e^(r)_m, e^(s)_n} = 2 ell (delta_{r,s+1} + delta_{r,s-1}) delta_{m+n+1,0},
//       creators n <= -1, fields e(x) = sum e_n x^{-n-1}.
enum class CarKind { kT, kE };

template <class S>
struct CarSpec {
  CarKind kind = CarKind::kT;
  S p = S(2);
  S ell = S(1);
  int flavor_lo = 0;
  int flavor_hi = 0;

  static CarSpec t_spec(const S& p) { return CarSpec{CarKind::kT, p, S(1), 0, 0}; }
  static CarSpec e_spec(const S& ell, int lo = -4, int hi = 5) {
    return CarSpec{CarKind::kE, S(2), ell, lo, hi};
  }

  int threshold() const { return kind == CarKind::kT ? 1 : 0; }
  int nu() const { return kind == CarKind::kT ? 0 : 1; }
  bool is_creator(const Generator& g) const { return g.mode < threshold(); }
  int grade_weight(const Generator& g) const { return -g.mode; }

  void check_flavor(int r) const {
    if (r < flavor_lo || r > flavor_hi) {
      throw FlavorOutOfWindow("flavor " + std::to_string(r) + " outside [" +
                              std::to_string(flavor_lo) + "," + std::to_string(flavor_hi) + "]");
    }
  }

  S pairing(const Generator& a, const Generator& b) const {
    if (kind == CarKind::kT) {
      if (a.mode + b.mode != 0) return S(0);
      return S(2) * (power(p, a.mode) + power(p, -a.mode));
    }
    if (a.mode + b.mode + 1 != 0) return S(0);
    if (a.flavor - b.flavor == 1 || b.flavor - a.flavor == 1) return S(2) * ell;
    return S(0);
  }

  // Annihilators pairing nontrivially with the creator g.
  std::vector<Generator> partners(const Generator& g) const {
    if (kind == CarKind::kT) return {{0, -g.mode}};
    std::vector<Generator> out;
    for (int r : {g.flavor - 1, g.flavor + 1}) {
      if (r >= flavor_lo && r <= flavor_hi) out.push_back({r, -g.mode - 1});
    }
    return out;
  }

  std::vector<int> flavors() const {
    std::vector<int> f;
    for (int r = flavor_lo; r <= flavor_hi; ++r) f.push_back(r);
    return f;
  }
};

// The vacuum module of a CAR spec: exterior algebra on the creators with
// self-paired creators squaring to pairing/2.
template <class S>
class FockModule {
 public:
  explicit FockModule(CarSpec<S> spec) : spec_(std::move(spec)) {}
  const CarSpec<S>& spec() const { return spec_; }
  FockVector<S> vacuum() const { return FockVector<S>::vacuum(); }

  FockVector<S> apply_mode(int r, int n, const FockVector<S>& w) const {
    spec_.check_flavor(r);
    const Generator g{r, n};
    FockVector<S> out;
    if (spec_.is_creator(g)) {
      for (const auto& [m, c] : w.terms()) apply_creator(g, m, c, out);
    } else {
      for (const auto& [m, c] : w.terms()) apply_annihilator(g, m, c, out);
    }
    return out;
  }

  int grade(const Monomial& m) const {
    int s = 0;
    for (const auto& g : m.gens) s += spec_.grade_weight(g);
    return s;
  }

  // Smallest N with a^{(r)}_n w = 0 for every n >= N.
  int restriction_bound(int r, const FockVector<S>& w) const {
    int N = spec_.threshold();
    for (const auto& [m, c] : w.terms()) {
      for (const auto& g : m.gens) {
        for (const auto& h : spec_.partners(g)) {
          if (h.flavor == r) N = std::max(N, h.mode + 1);
        }
      }
    }
    return N;
  }
  int restriction_bound(const FockVector<S>& w) const {
    int N = spec_.threshold();
    for (int r : spec_.flavors()) N = std::max(N, restriction_bound(r, w));
    return N;
  }

  // Basis monomials of grade <= N, ordered by grade then monomial order.
  std::vector<Monomial> basis(int N) const {
    std::vector<Generator> creators;
    for (int r : spec_.flavors()) {
      for (int n = spec_.threshold() - 1; spec_.grade_weight({r, n}) <= N; --n) {
        creators.push_back({r, n});
      }
    }
    std::sort(creators.begin(), creators.end(), gen_less);
    std::vector<Monomial> out;
    Monomial cur;
    enumerate(creators, 0, 0, N, cur, out);
    std::stable_sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) {
      int ga = grade(a), gb = grade(b);
      if (ga != gb) return ga < gb;
      return a < b;
    });
    return out;
  }

  std::vector<int> graded_dimensions(int N) const {
    std::vector<int> d(N + 1, 0);
    for (const auto& m : basis(N)) ++d[grade(m)];
    return d;
  }

  // {a^{(r)}_m, a^{(s)}_n} w = pairing w on every basis vector of grade <= N.
  bool anticommutator_check(Generator a, Generator b, int N) const {
    const S pr = spec_.pairing(a, b);
    for (const auto& m : basis(N)) {
      FockVector<S> w = FockVector<S>::basis(m);
      FockVector<S> lhs = apply_mode(a.flavor, a.mode, apply_mode(b.flavor, b.mode, w)) +
                          apply_mode(b.flavor, b.mode, apply_mode(a.flavor, a.mode, w));
      if (!(lhs == w * pr)) return false;
    }
    return true;
  }

  // sum_n lambda^{-n-nu} (a^{(r)}_n w) x^{-n-nu} on exponents window.lo..hi
  // of `var`. Exponents below the restriction cutoff vanish.
  Series<FockVector<S>> apply_field(int r, const S& lambda, const FockVector<S>& w,
                                    const Interval& window, const VarId& var = "x") const {
    spec_.check_flavor(r);
    if (window.hi >= kPosInf) throw InsufficientWindow("apply_field needs a finite upper bound");
    const int nu = spec_.nu();
    const long floor = -(restriction_bound(r, w) - 1) - nu;  // i = -n - nu, n <= N - 1
    Series<FockVector<S>> out({var});
    out.set_box(0, window);
    out.set_support_raw(0, {floor, kPosInf});
    for (long i = std::max(window.lo, floor); i <= window.hi; ++i) {
      const int n = static_cast<int>(-i - nu);
      FockVector<S> v = apply_mode(r, n, w);
      if (v.is_zero()) continue;
      out.insert({static_cast<int>(i)}, v * power(lambda, i));
    }
    return out;
  }

 private:
  void enumerate(const std::vector<Generator>& creators, size_t from, int weight, int N,
                 Monomial& cur, std::vector<Monomial>& out) const {
    out.push_back(cur);
    for (size_t i = from; i < creators.size(); ++i) {
      int w = weight + spec_.grade_weight(creators[i]);
      if (w > N) continue;
      cur.gens.push_back(creators[i]);
      enumerate(creators, i + 1, w, N, cur, out);
      cur.gens.pop_back();
    }
  }

  void apply_creator(const Generator& g, const Monomial& m, const S& c, FockVector<S>& out) const {
    size_t pos = 0;
    while (pos < m.gens.size() && gen_less(m.gens[pos], g)) {
      // Creators anticommute unless they are the same self-paired generator.
      check_invariant(spec_.pairing(g, m.gens[pos]).is_zero(), "creator pair with nonzero pairing");
      ++pos;
    }
    const S sign = (pos % 2) ? S(-1) : S(1);
    if (pos < m.gens.size() && m.gens[pos] == g) {
      S sq = spec_.pairing(g, g);
      if (sq.is_zero()) return;
      Monomial rest = m;
      rest.gens.erase(rest.gens.begin() + static_cast<long>(pos));
      out.add(rest, c * sign * sq * S(Rational(1, 2)));
      return;
    }
    for (size_t k = pos; k < m.gens.size(); ++k) {
      check_invariant(spec_.pairing(g, m.gens[k]).is_zero(), "creator pair with nonzero pairing");
    }
    Monomial ins = m;
    ins.gens.insert(ins.gens.begin() + static_cast<long>(pos), g);
    out.add(ins, c * sign);
  }

  void apply_annihilator(const Generator& g, const Monomial& m, const S& c,
                         FockVector<S>& out) const {
    for (size_t i = 0; i < m.gens.size(); ++i) {
      S pr = spec_.pairing(g, m.gens[i]);
      if (pr.is_zero()) continue;
      Monomial rest = m;
      rest.gens.erase(rest.gens.begin() + static_cast<long>(i));
      out.add(rest, (i % 2) ? -(c * pr) : c * pr);
    }
  }

  CarSpec<S> spec_;
};

}  // namespace phiq
