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
#include <vector>

#include "phiq/errors.hpp"
#include "phiq/factored.hpp"
#include "phiq/fieldcalc.hpp"
#include "phiq/fock.hpp"
#include "phiq/powerseries.hpp"
#include "phiq/report.hpp"
#include "phiq/scalar.hpp"

namespace phiq {

template <class S>
struct DVirParams {
  S p;
  S q;
  S t() const { return q / p; }
  static DVirParams q_minus_one(const S& p) { return {p, S(-1)}; }
  bool q_is_minus_one() const { return q == S(-1); }
};

// f_0..f_N of f(z) = exp(sum_{n>=1} (1-q^n)(1-t^{-n})/(1+p^n) z^n/n).
template <class S>
std::vector<S> f_coefficients(const DVirParams<S>& P, int N) {
  if (P.p.is_zero() || P.q.is_zero()) throw ConfigError("p and q must be nonzero");
  const S tinv = P.p / P.q;
  std::vector<S> g(N + 1, S(0));
  S pn(1), qn(1), tn(1);
  for (int n = 1; n <= N; ++n) {
    pn *= P.p;
    qn *= P.q;
    tn *= tinv;
    const S den = S(1) + pn;
    if (den.is_zero()) throw PoleAtPoint("1 + p^" + std::to_string(n) + " vanishes");
    g[n] = (S(1) - qn) * (S(1) - tn) / den / S(n);
  }
  return ps_exp(g, N);
}

// Right-hand scalar of the (m, -m) relation.
template <class S>
S central_term(const DVirParams<S>& P, int m) {
  const S one(1);
  return -((one - P.q) * (one - P.p / P.q) / (one - P.p)) * (power(P.p, m) - power(P.p, -m));
}

// The universal restricted module: T-modes with
// {T_m, T_n} = 2(p^m + p^{-m}) delta_{m+n,0}, T_n vac = 0 for n > 0.
template <class S>
FockModule<S> t_fock(const DVirParams<S>& P) {
  if (!P.q_is_minus_one()) throw ConfigError("the T-Fock module realizes q = -1 only");
  return FockModule<S>(CarSpec<S>::t_spec(P.p));
}

template <class S>
struct DVirRelationReport {
  int m = 0;
  int n = 0;
  FockVector<S> defect;
  S central{0};
  int truncation = 0;      // terms l >= truncation vanish on w
  bool certified = false;  // the `extra` terms beyond it were computed and vanished
  bool holds() const { return defect.is_zero() && certified; }
};

// sum_{l>=0} f_l (T_{m-l} T_{n+l} - T_{n-l} T_{m+l}) w - central(m) delta_{m+n,0} w
// with T_k the modes of the field T (coefficient of x^{-k}). The sum stops
// at the restriction certificate; `extra` further terms are evaluated too.
template <class S>
DVirRelationReport<S> vir_relation_check(const FieldOperator<S>& T, const DVirParams<S>& P,
                                         const std::vector<S>& f, int m, int n,
                                         const FockVector<S>& w, int extra = 0) {
  const int nu = T.module().spec().nu();
  auto mode = [&](int k, const FockVector<S>& v) { return T.coefficient(-k - nu, v); };
  const int R = T.module().restriction_bound(T.flavor(), w);
  DVirRelationReport<S> rep;
  rep.m = m;
  rep.n = n;
  rep.truncation = std::max({0, R - n, R - m});
  const int len = rep.truncation + extra;
  if (static_cast<int>(f.size()) < len) throw InsufficientWindow("too few f coefficients");
  FockVector<S> lhs;
  bool tail_zero = true;
  for (int l = 0; l < len; ++l) {
    FockVector<S> term = mode(m - l, mode(n + l, w)) - mode(n - l, mode(m + l, w));
    if (l >= rep.truncation && !term.is_zero()) tail_zero = false;
    if (!term.is_zero()) lhs += term * f[l];
  }
  rep.central = central_term(P, m);
  rep.defect = m + n == 0 ? lhs - w * rep.central : lhs;
  rep.certified = tail_zero;
  return rep;
}

template <class S>
DVirRelationReport<S> vir_relation_check(const FockModule<S>& M, const DVirParams<S>& P, int m,
                                         int n, const FockVector<S>& w, int extra = 0) {
  const auto T = FieldOperator<S>::mode_field(M, 0);
  const int R = M.restriction_bound(0, w);
  return vir_relation_check(T, P, f_coefficients(P, std::max({0, R - n, R - m}) + extra), m, n, w,
                            extra);
}

// --- The T realization: Y_W(e^{(r)}, x) = T(p^r x). ---

template <class S>
CovariantStructure<S> t_realization(const FockModule<S>& M, const S& p, int lo, int hi,
                                    std::optional<S> chi_base = std::nullopt,
                                    int scale_exponent = 1) {
  return {chi_base.value_or(p), lo, hi, [&M, p, scale_exponent](int r) {
            return FieldOperator<S>::mode_field(M, 0, power(p, scale_exponent * r));
          }};
}

// (x - p^{s+1-r})(x - p^{s-1-r}): the anticommutator support of
// (T(p^r x), T(p^s x)).
template <class S>
FactoredRational<S> t_minimal_annihilator(const S& p, int r, int s) {
  return FactoredRational<S>::from_roots({power(p, s + 1 - r), power(p, s - 1 - r)});
}

// The locality witness with the additional factor (x + p^{s-r}).
template <class S>
FactoredRational<S> t_locality_annihilator(const S& p, int r, int s) {
  return t_minimal_annihilator(p, r, s) * FactoredRational<S>::linear(-power(p, s - r));
}

template <class S>
LocalityDatum<S> t_locality_datum(const CovariantStructure<S>& C, int r, int s,
                                  const FactoredRational<S>& ann) {
  return {C.field(r), C.field(s), {{C.field(s), C.field(r), FactoredRational<S>::constant(S(-1))}}, ann};
}

// A(x1, x2) with (x1 - p x2)(p x1 - x2) Y(x1) Y(x2) w = (x1 - x2) A(x1, x2) w,
// evaluated on the two diagonals: at x2^d, A(p x2, x2) and at x1^d,
// A(x1, p x1). Also reports whether G(x, x) vanishes, which is what makes A
// lower-truncated in both variables.
template <class S>
struct DefectQuotient {
  bool divisible = true;
  std::optional<long> failing_diagonal;
  std::map<long, FockVector<S>> at_px2;
  std::map<long, FockVector<S>> at_px1;
};

template <class S>
DefectQuotient<S> defect_quotient(const FieldOperator<S>& Y, const S& p, const FockVector<S>& w,
                                  const FieldWindow& fw) {
  const auto poly = FactoredRational<S>::from_roots({p, p.inverse()});
  // B = (s - p)(s - 1/p) Y(x1) Y(x) w and G = p x^2 B.
  const Window win = ye_window(Y, Y, poly, w, FieldWindow{{fw.x.lo, fw.x.hi + 2}, fw.margin});
  auto [cr, B] = compat_product(Y, Y, poly, w, win, fw.margin, "x1", "x");
  if (cr.verdict == Compat::kIncompatible) throw IncompatibleFields("defect product has a delta tail");
  if (cr.verdict != Compat::kCompatibleOnWindow) throw InsufficientWindow("defect product not certified");
  const long i0 = cr.bound, jlo = win.get("x").lo;
  auto G = [&](long i, long j) {
    Exps e{static_cast<int>(i), static_cast<int>(j - 2)};
    if (!B.known(e)) throw InsufficientWindow("defect quotient leaves the window");
    return B.coeff(e) * p;
  };
  DefectQuotient<S> out;
  // Diagonal sums of G vanish iff (x1 - x2) divides it in W((x1, x2)).
  for (long d = fw.x.lo; d <= fw.x.hi; ++d) {
    FockVector<S> sum;
    for (long i = i0; i <= d - jlo - 2; ++i) sum += G(i, d - i);
    if (!sum.is_zero() && !out.failing_diagonal) {
      out.divisible = false;
      out.failing_diagonal = d;
    }
  }
  // A_{a,b} = sum_{k>=0} G_{a+1+k, b-k}, nonzero only for a >= i0 - 1 and
  // b >= jlo + 2.
  auto A = [&](long a, long b) {
    FockVector<S> acc;
    for (long k = 0; b - k >= jlo + 2; ++k) acc += G(a + 1 + k, b - k);
    return acc;
  };
  for (long d = fw.x.lo; d <= fw.x.hi; ++d) {
    FockVector<S> e1, e2;
    for (long a = i0 - 1; d - a >= jlo + 2; ++a) {
      auto v = A(a, d - a);
      if (v.is_zero()) continue;
      e1 += v * power(p, a);
      e2 += v * power(p, d - a);
    }
    out.at_px2[d] = e1;
    out.at_px1[d] = e2;
  }
  return out;
}

// --- Suites. ---

struct PhiModuleConfig {
  int flavor_lo = -2;
  int flavor_hi = 3;
  int grade = 5;
  int zorder = 6;
  int margin = 4;
  int jobs = 1;
  bool corrupt_character = false;  // negative-control fixture: chi(n) = p^{2n}
};

namespace detail {

template <class S>
std::vector<FockVector<S>> basis_vectors(const FockModule<S>& M, int N) {
  std::vector<FockVector<S>> out;
  for (const auto& m : M.basis(N)) out.push_back(FockVector<S>::basis(m));
  return out;
}

inline std::string pair_tag(const char* a, int x, const char* b, int y) {
  return std::string("[") + a + "=" + std::to_string(x) + "," + b + "=" + std::to_string(y) + "]";
}

inline std::string interval_window(const char* v, const Interval& iv) {
  return std::string(v) + "=" + iv.to_string();
}

}  // namespace detail

// Checks that the fields T(p^r x) on the T-Fock module form a covariant
// phi-coordinated quasi module for the free-fermion vertex superalgebra.
template <class S>
std::vector<CheckResult> phi_module_suite(const DVirParams<S>& P, const PhiModuleConfig& cfg) {
  if (!P.q_is_minus_one()) throw ConfigError("phi-module suite needs q = -1");
  const FockModule<S> M = t_fock(P);
  const S p = P.p;
  const auto basis = detail::basis_vectors(M, cfg.grade);
  const std::optional<S> chi = cfg.corrupt_character ? std::optional<S>(p * p) : std::nullopt;
  // The group acts one step beyond the flavor window so that boundary
  // flavors keep both neighbors.
  const auto C = t_realization(M, p, cfg.flavor_lo - 1, cfg.flavor_hi + 1, chi);
  const auto Cw = t_realization(M, p, cfg.flavor_lo, cfg.flavor_hi, chi);
  const int N = cfg.grade;
  const Interval xw{-(N + 3), N + 3};
  Window loc_win;
  loc_win.set("x1", xw).set("x2", xw);
  Window com_win;
  com_win.set("x1", -4, 4).set("x2", -4, 4);
  const FieldWindow fw{{-3, 3}, cfg.margin};

  std::vector<std::function<CheckResult()>> tasks;
  const auto grade_tag = " grade<=" + std::to_string(N);
  for (int r = cfg.flavor_lo; r <= cfg.flavor_hi; ++r) {
    for (int s = cfg.flavor_lo; s <= cfg.flavor_hi; ++s) {
      tasks.push_back([&, r, s] {
        return run_check("phi-module/locality" + detail::pair_tag("r", r, "s", s),
                         window_string(loc_win) + grade_tag, [&](CheckResult& res) {
          const auto L = t_locality_datum(C, r, s, t_locality_annihilator(p, r, s));
          for (const auto& w : basis) {
            auto d = locality_check_detail(L, w, loc_win);
            if (!d.holds) {
              res.status = Status::kFail;
              res.counterexample = make_counterexample(d.vars, *d.counterexample, d.difference + " on " + w.to_string());
              return;
            }
          }
        });
      });
    }
  }
  for (int r = cfg.flavor_lo; r <= cfg.flavor_hi; ++r) {
    for (int s = cfg.flavor_lo; s <= cfg.flavor_hi; ++s) {
      tasks.push_back([&, r, s] {
        return run_check("phi-module/anticommutator" + detail::pair_tag("r", r, "s", s),
                         window_string(com_win) + grade_tag, [&](CheckResult& res) {
          const auto L = t_locality_datum(C, r, s, t_minimal_annihilator(p, r, s));
          for (const auto& w : basis) {
            auto c = commutator_formula_check(C, r, s, L, w, com_win, cfg.margin);
            if (!c.check.holds) {
              res.status = Status::kFail;
              res.detail = c.check.note;
              res.counterexample = c.check.counterexample
                                       ? make_counterexample(c.check.vars, *c.check.counterexample, c.check.difference + " on " + w.to_string())
                                       : Counterexample{{}, c.check.note + " on " + w.to_string()};
              return;
            }
            // Exactly the neighbors e^{(s +- 1)} of e^{(s)} contribute.
            std::vector<int> want{s - 1 - r, s + 1 - r};
            if (c.contributing != want) {
              res.status = Status::kFail;
              res.counterexample = Counterexample{{}, "unexpected contributing group elements"};
              return;
            }
          }
        });
      });
    }
  }
  for (int r = cfg.flavor_lo; r <= cfg.flavor_hi; ++r) {
    for (int n = cfg.flavor_lo - r; n <= cfg.flavor_hi - r; ++n) {
      tasks.push_back([&, r, n] {
        return run_check("phi-module/covariance" + detail::pair_tag("r", r, "n", n),
                         detail::interval_window("x", xw) + grade_tag, [&](CheckResult& res) {
          auto c = covariance_check(Cw, r, n, N, xw);
          if (!c.holds) {
            res.status = Status::kFail;
            res.counterexample = make_counterexample(c.vars, *c.counterexample, c.difference);
          }
        });
      });
    }
  }
  for (int r = cfg.flavor_lo; r <= cfg.flavor_hi; ++r) {
    for (int s : {r - 1, r + 1}) {
      if (s < cfg.flavor_lo || s > cfg.flavor_hi) continue;
      tasks.push_back([&, r, s] {
        return run_check("phi-module/associativity" + detail::pair_tag("r", r, "s", s),
                         detail::interval_window("x", fw.x) + " zorder=" + std::to_string(cfg.zorder) + grade_tag,
                         [&](CheckResult& res) {
          for (const auto& w : basis) {
            auto a = assoc_check(C.field(r), C.field(s), t_locality_annihilator(p, r, s), w, cfg.zorder, fw,
                                 t_minimal_annihilator(p, r, s));
            if (!a.holds) {
              res.status = Status::kFail;
              res.counterexample = make_counterexample(a.vars, *a.counterexample, a.difference + " on " + w.to_string());
              return;
            }
          }
        });
      });
      tasks.push_back([&, r, s] {
        return run_check("phi-module/top-mode" + detail::pair_tag("r", r, "s", s),
                         detail::interval_window("x", fw.x) + grade_tag, [&](CheckResult& res) {
          const auto L = t_locality_datum(C, r, s, t_locality_annihilator(p, r, s));
          for (const auto& w : basis) {
            auto md = ye_product(L.a, L.b, L.p, w, 1, fw);
            auto rz = residue_ye(L, w, 1, fw);
            FockSeries<S> want({"x"});
            want.set_box(0, fw.x);
            want.insert({0}, w * S(2));
            auto bad = first_difference(md.mode(0), want);
            if (!bad) bad = first_difference(rz.top, want);
            if (!bad && md.k != 1) bad = Exps{static_cast<int>(md.k)};
            if (bad) {
              res.status = Status::kFail;
              res.counterexample = make_counterexample({"x"}, *bad, "top mode differs from 2 " + w.to_string());
              return;
            }
          }
        });
      });
    }
  }
  return parallel_map<CheckResult>(tasks.size(), cfg.jobs, [&](size_t i) { return tasks[i](); });
}

struct VirConfig {
  int grade = 6;
  int modes = 4;
  int extra = 5;
  int jobs = 1;
};

// Relations of the deformed Virasoro algebra for the modes of T on every
// basis vector of grade <= N, |m|, |n| <= M; one result per (m, n).
template <class S>
std::vector<CheckResult> relation_checks(const std::string& prefix, const FieldOperator<S>& T,
                                         const DVirParams<S>& P, const VirConfig& cfg) {
  const auto basis = detail::basis_vectors(T.module(), cfg.grade);
  int maxR = 0;
  for (const auto& w : basis) maxR = std::max(maxR, T.module().restriction_bound(T.flavor(), w));
  const auto f = f_coefficients(P, maxR + 2 * cfg.modes + cfg.extra + 1);
  std::vector<std::pair<int, int>> mn;
  for (int m = -cfg.modes; m <= cfg.modes; ++m)
    for (int n = -cfg.modes; n <= cfg.modes; ++n) mn.push_back({m, n});
  const std::string win = "grade<=" + std::to_string(cfg.grade) + " extra=" + std::to_string(cfg.extra);
  return parallel_map<CheckResult>(mn.size(), cfg.jobs, [&](size_t i) {
    const auto [m, n] = mn[i];
    return run_check(prefix + detail::pair_tag("m", m, "n", n), win, [&](CheckResult& res) {
      for (size_t k = 0; k < basis.size(); ++k) {
        auto rep = vir_relation_check(T, P, f, m, n, basis[k], cfg.extra);
        if (!rep.holds()) {
          res.status = Status::kFail;
          res.counterexample = Counterexample{{{"basis", static_cast<long>(k)}},
                                              (rep.certified ? "" : "uncertified truncation; ") +
                                                  rep.defect.to_string()};
          return;
        }
      }
    });
  });
}

// The converse direction: T(x) := Y_W(e^{(1)}, x) satisfies the deformed
// Virasoro relations, its anticommutator matches the module's pairing, and
// the defect quotient A evaluates to 2p(p+1) x on both diagonals.
template <class S>
std::vector<CheckResult> converse_suite(const DVirParams<S>& P, const VirConfig& cfg, int margin = 4) {
  if (!P.q_is_minus_one()) throw ConfigError("converse suite needs q = -1");
  const FockModule<S> M = t_fock(P);
  const S p = P.p;
  const auto C = t_realization(M, p, 0, 2);
  const auto T = C.field(1);
  auto out = relation_checks("converse/relations", T, P, cfg);

  const auto basis = detail::basis_vectors(M, cfg.grade);
  out.push_back(run_check("converse/anticommutator", "grade<=" + std::to_string(cfg.grade) +
                          " |m|,|n|<=" + std::to_string(cfg.modes), [&](CheckResult& res) {
    for (int m = -cfg.modes; m <= cfg.modes; ++m) {
      for (int n = -cfg.modes; n <= cfg.modes; ++n) {
        const S pr = M.spec().pairing({0, m}, {0, n});
        for (const auto& w : basis) {
          auto lhs = T.coefficient(-m, T.coefficient(-n, w)) + T.coefficient(-n, T.coefficient(-m, w));
          if (!(lhs == w * pr)) {
            res.status = Status::kFail;
            res.counterexample = Counterexample{{{"m", m}, {"n", n}}, w.to_string()};
            return;
          }
        }
      }
    }
  }));

  const FieldWindow fw{{-3, 3}, margin};
  const int qgrade = std::min(cfg.grade, 3);
  const auto qbasis = detail::basis_vectors(M, qgrade);
  const S want_coeff = S(2) * p * (p + S(1));
  out.push_back(run_check("converse/defect-quotient", detail::interval_window("x", fw.x) +
                          " grade<=" + std::to_string(qgrade), [&](CheckResult& res) {
    auto results = parallel_map<std::optional<Counterexample>>(qbasis.size(), cfg.jobs, [&](size_t k) {
      const auto& w = qbasis[k];
      auto q = defect_quotient(T, p, w, fw);
      if (!q.divisible) {
        return std::optional<Counterexample>(Counterexample{{{"x", *q.failing_diagonal}}, "not divisible on " + w.to_string()});
      }
      for (long d = fw.x.lo; d <= fw.x.hi; ++d) {
        const auto want = d == 1 ? w * want_coeff : FockVector<S>();
        if (!(q.at_px2.at(d) == want) || !(q.at_px1.at(d) == want)) {
          return std::optional<Counterexample>(Counterexample{{{"x", d}}, w.to_string()});
        }
      }
      return std::optional<Counterexample>();
    });
    for (auto& r : results) {
      if (r) {
        res.status = Status::kFail;
        res.counterexample = r;
        return;
      }
    }
  }));
  return out;
}

}  // namespace phiq
