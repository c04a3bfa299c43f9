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
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "phiq/closed_form.hpp"
#include "phiq/distributions.hpp"
#include "phiq/dvir.hpp"
#include "phiq/errors.hpp"
#include "phiq/fieldcalc.hpp"
#include "phiq/fock.hpp"
#include "phiq/formal.hpp"
#include "phiq/report.hpp"
#include "phiq/scalar.hpp"

namespace phiq {

struct SuiteConfig {
  std::string suite = "all";
  ScalarField field = ScalarField::symbolic();
  std::optional<int> grade;  // suite default when unset
  int modes = 4;
  int flavor_lo = -2;
  int flavor_hi = 3;
  int zorder = 6;
  int margin = 4;
  int jobs = 1;
  bool corrupt_character = false;

  static const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"formal-calc", "clifford", "dvir", "phi-module",
                                                "commutator", "all"};
    return names;
  }
  int grade_or(int fallback) const { return grade.value_or(fallback); }

  void validate() const {
    const auto& n = suite_names();
    if (std::find(n.begin(), n.end(), suite) == n.end()) throw ConfigError("unknown suite '" + suite + "'");
    if (!field.is_symbolic()) ScalarField::check_point(field.p0);
    if (grade && *grade < 0) throw ConfigError("grade must be nonnegative");
    if (modes < 0) throw ConfigError("modes must be nonnegative");
    if (flavor_lo > flavor_hi) throw ConfigError("empty flavor window");
    if (zorder < 1) throw ConfigError("zorder must be positive");
    if (margin < 1) throw ConfigError("window margin must be positive");
    if (jobs < 1) throw ConfigError("jobs must be positive");
  }
};

// 0 all pass, 1 some failure, 2 otherwise some undetermined.
inline int exit_status(const std::vector<CheckResult>& rs) {
  bool undetermined = false;
  for (const auto& r : rs) {
    if (r.status == Status::kFail) return 1;
    if (r.status == Status::kUndetermined) undetermined = true;
  }
  return undetermined ? 2 : 0;
}

namespace detail {

// Fixed-seed sampler for the randomized checks.
class SuiteRng {
 public:
  explicit SuiteRng(unsigned seed) : rng_(seed) {}
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  Rational rational(long mag) { return Rational(integer(-mag, mag), integer(1, mag)); }
  Rational nonzero_rational(long mag) {
    Rational r;
    do r = rational(mag);
    while (r.is_zero());
    return r;
  }
  Series<Rational> laurent(std::vector<VarId> vars, int terms, int r) {
    std::map<Exps, Rational> t;
    for (int i = 0; i < terms; ++i) {
      Exps e;
      for (size_t k = 0; k < vars.size(); ++k) e.push_back(static_cast<int>(integer(-r, r)));
      t[e] += rational(6);
    }
    std::erase_if(t, [](const auto& kv) { return kv.second.is_zero(); });
    return Series<Rational>::polynomial(std::move(vars), t);
  }

 private:
  std::mt19937 rng_;
};

inline Window square(long r) {
  Window w;
  w.set("x1", -r, r).set("x2", -r, r);
  return w;
}

inline void fail_with(CheckResult& res, std::string what) {
  res.status = Status::kFail;
  res.counterexample = Counterexample{{}, std::move(what)};
}

}  // namespace detail

// --- formal-calc: expansions, delta calculus, three-term identity. ---

template <class S>
std::vector<CheckResult> formal_calc_suite(const S& p) {
  using Q = Rational;
  using SQ = Series<Q>;
  std::vector<CheckResult> out;
  const RegionTag k12{"x1", "x2"}, k21{"x2", "x1"};

  const Window w10 = detail::square(10);
  out.push_back(run_check("formal-calc/expansion-difference", window_string(w10), [&](CheckResult& res) {
    // iota12 (x1-x2)^{-1} - iota21 (x1-x2)^{-1} = x1^{-1} delta(x2/x1).
    auto d = binom_expand<Q>(-1, "x1", "x2", k12, w10).restricted(w10).with_region({}) -
             binom_expand<Q>(-1, "x1", "x2", k21, w10).restricted(w10).with_region({});
    auto want = delta_expand(DeltaTerm<Q>{Q(1), 0, SQ::polynomial({"x2"}, {{{-1}, Q(1)}})}, w10);
    if (auto e = first_difference(d, want)) detail::fail_with(res, "mismatch at x1^" + std::to_string((*e)[0]));
  }));

  const Window w18 = detail::square(18);
  out.push_back(run_check("formal-calc/substitution", window_string(detail::square(12)), [&](CheckResult& res) {
    detail::SuiteRng g(31);
    for (int it = 0; it < 30; ++it) {
      SQ f = g.laurent({"x1", "x2"}, 6, 3);
      DeltaTerm<Q> t{Q(1), 0, g.laurent({"x2"}, 3, 2)};
      auto r = substitute_diag(f, t);
      if (!equal_on_window(f * delta_expand(t, w18), delta_expand(r, detail::square(12)))) {
        detail::fail_with(res, "instance " + std::to_string(it));
        return;
      }
    }
  }));

  const Window w20 = detail::square(20);
  std::vector<std::pair<std::string, S>> lambdas{{"1", S(1)}, {"2", S(2)}, {"-3", S(-3)}, {"p", p}};
  for (const auto& [name, lambda] : lambdas) {
    out.push_back(run_check("formal-calc/annihilation[lambda=" + name + "]", window_string(w20),
                            [&, lambda](CheckResult& res) {
      for (int k = 1; k <= 4; ++k) {
        for (int j = 0; j <= k; ++j) {
          // Vanishes exactly for j < k.
          if (annihilation_check(lambda, k, j, w20) != (j < k)) {
            res.status = Status::kFail;
            res.counterexample = Counterexample{{{"k", k}, {"j", j}}, j < k ? "nonzero" : "unexpectedly zero"};
            return;
          }
        }
      }
    }));
  }

  out.push_back(run_check("formal-calc/delta-roundtrip", window_string(w20), [&](CheckResult& res) {
    detail::SuiteRng g(32);
    for (int it = 0; it < 50; ++it) {
      std::vector<Q> ls;
      const int nl = static_cast<int>(g.integer(1, 3));
      while (static_cast<int>(ls.size()) < nl) {
        Q l = g.nonzero_rational(3);
        if (std::find(ls.begin(), ls.end(), l) == ls.end()) ls.push_back(l);
      }
      const int jmax = static_cast<int>(g.integer(0, 3));
      SQ D({"x1", "x2"});
      D.set_box(0, w20.get("x1"));
      D.set_box(1, w20.get("x2"));
      std::map<std::pair<int, int>, SQ> truth;
      for (int li = 0; li < nl; ++li) {
        for (int j = 0; j <= jmax; ++j) {
          if (g.integer(0, 2) == 0) continue;
          SQ A = g.laurent({"x2"}, 3, 5);
          if (A.terms().empty()) continue;
          truth[{li, j}] = A;
          D = D + delta_expand(DeltaTerm<Q>{ls[li], j, A}, w20);
        }
      }
      auto fit = delta_fit(D, ls, jmax);
      bool ok = fit.size() == truth.size();
      for (const auto& t : fit) {
        const int li = static_cast<int>(std::find(ls.begin(), ls.end(), t.lambda) - ls.begin());
        auto it2 = truth.find({li, t.j});
        ok = ok && it2 != truth.end() && equal_on_window(t.coeff, it2->second);
      }
      if (!ok) {
        detail::fail_with(res, "instance " + std::to_string(it));
        return;
      }
    }
    SQ zero({"x1", "x2"});
    zero.set_box(0, {-6, 6});
    zero.set_box(1, {-6, 6});
    if (!delta_fit(zero, std::vector<Q>{Q(1), Q(3), Q(-2)}, 3).empty()) detail::fail_with(res, "zero series");
  }));

  out.push_back(run_check("formal-calc/delta-decompose", window_string(w20), [&](CheckResult& res) {
    detail::SuiteRng g(33);
    for (int it = 0; it < 20; ++it) {
      std::vector<Q> roots;
      std::vector<RootFactor<Q>> fs;
      const int nr = static_cast<int>(g.integer(1, 2));
      while (static_cast<int>(roots.size()) < nr) {
        Q r = g.nonzero_rational(3);
        if (std::find(roots.begin(), roots.end(), r) != roots.end()) continue;
        roots.push_back(r);
        fs.push_back({r, -static_cast<int>(g.integer(1, 2))});
      }
      FactoredRational<Q> f(g.nonzero_rational(4), static_cast<int>(g.integer(-2, 2)), fs);
      auto ab = iota_expand(f, "x1", "x2", k12, w20);
      auto K = iota_expand(f, "x1", "x2", k21, w20);
      // The denominator of f is the annihilator.
      auto terms = delta_decompose(ab, K, f.inverse() * FactoredRational<Q>(f.constant_factor(), f.monomial_exponent(), {}));
      auto want = closed_form_delta_terms(f, roots);
      bool ok = terms.size() == want.size();
      for (const auto& t : terms) {
        const int li = static_cast<int>(std::find(roots.begin(), roots.end(), t.lambda) - roots.begin());
        auto w = want.find({li, t.j});
        ok = ok && w != want.end() && t.coeff.terms().size() == 1 && t.coeff.coeff({0}) == w->second;
      }
      if (!ok) {
        detail::fail_with(res, "instance " + std::to_string(it) + ": " + f.to_string());
        return;
      }
    }
  }));

  out.push_back(run_check("formal-calc/vanishing-order", "exact", [&](CheckResult& res) {
    detail::SuiteRng g(34);
    for (int it = 0; it < 30; ++it) {
      const Q lambda = g.nonzero_rational(4);
      // x1^a x2^b + x1^c x2^d with B(lambda x2, x2) != 0 unless the two
      // terms cancel on the diagonal; skip those.
      SQ B = g.laurent({"x1", "x2"}, 3, 3);
      std::map<long, Q> diag;
      for (const auto& [e, c] : B.terms()) diag[e[0] + e[1]] += c * power(lambda, e[0]);
      if (std::all_of(diag.begin(), diag.end(), [](const auto& kv) { return kv.second.is_zero(); })) continue;
      const int k = static_cast<int>(g.integer(0, 4));
      SQ A = linear_power<Q>(k, lambda, "x1", "x2", k12, Window{}) * B;
      if (vanishing_order(A, lambda) != k) {
        detail::fail_with(res, "instance " + std::to_string(it));
        return;
      }
    }
  }));

  const Window w4 = detail::square(4);
  out.push_back(run_check("formal-calc/three-term", window_string(w4) + " z=[-4,4]", [&](CheckResult& res) {
    detail::SuiteRng g(35);
    for (int it = 0; it < 12; ++it) {
      SQ F = g.laurent({"x1", "x2"}, 4, 2);
      if (F.terms().empty()) continue;
      const int k = static_cast<int>(g.integer(0, 2));
      auto d = three_term_data(F, k, 6, detail::square(30));
      auto ok = three_term_check_detail(d.A, d.B, d.C, k, -4, 4, w4);
      if (!ok.holds || !ok.precondition) {
        res.status = Status::kFail;
        res.counterexample = ok.counterexample ? make_counterexample({"x1", "x2", "z"}, *ok.counterexample, "instance " + std::to_string(it))
                                               : Counterexample{{}, "instance " + std::to_string(it)};
        return;
      }
      // A single corrupted coefficient of C must be detected.
      SQ C2 = d.C;
      const Exps e{0, 0};
      for (size_t i = 0; i < e.size(); ++i) C2.set_support_raw(i, C2.support(i).hull(Interval::point(e[i])));
      C2.insert(e, Q(1));
      if (three_term_check_detail(d.A, d.B, C2, k, -4, 4, w4).holds) {
        detail::fail_with(res, "corruption undetected in instance " + std::to_string(it));
        return;
      }
    }
  }));
  return out;
}

// --- clifford: the free-fermion and T-mode Fock modules. ---

template <class S>
std::vector<CheckResult> clifford_suite(const S& p, int N) {
  std::vector<CheckResult> out;
  const std::string win = "grade<=" + std::to_string(N);
  const FockModule<Rational> E(CarSpec<Rational>::e_spec(Rational(1), -2, 3));
  const FockModule<S> T(CarSpec<S>::t_spec(p));
  out.push_back(run_check("clifford/car[e]", win + " modes=[-3,3]", [&](CheckResult& res) {
    for (int r : E.spec().flavors())
      for (int s : E.spec().flavors())
        for (int m = -3; m <= 3; ++m)
          for (int n = -3; n <= 3; ++n)
            if (!E.anticommutator_check({r, m}, {s, n}, std::min(N, 3))) {
              res.status = Status::kFail;
              res.counterexample = Counterexample{{{"r", r}, {"s", s}, {"m", m}, {"n", n}}, "anticommutator"};
              return;
            }
  }));
  out.push_back(run_check("clifford/car[t]", win + " modes=[-4,4]", [&](CheckResult& res) {
    for (int m = -4; m <= 4; ++m)
      for (int n = -4; n <= 4; ++n)
        if (!T.anticommutator_check({0, m}, {0, n}, N)) {
          res.status = Status::kFail;
          res.counterexample = Counterexample{{{"m", m}, {"n", n}}, "anticommutator"};
          return;
        }
  }));
  out.push_back(run_check("clifford/vertex-algebra-modes", "vacuum", [&](CheckResult& res) {
    const auto vac = E.vacuum();
    // e^{(r)}_0 e^{(s)}_{-1} vac = 2 l (delta_{r,s+1} + delta_{r,s-1}) vac.
    for (int r : E.spec().flavors()) {
      for (int s : E.spec().flavors()) {
        const Rational want = std::abs(r - s) == 1 ? Rational(2) : Rational(0);
        if (!(E.apply_mode(r, 0, E.apply_mode(s, -1, vac)) == vac * want)) {
          res.status = Status::kFail;
          res.counterexample = Counterexample{{{"r", r}, {"s", s}}, "e_0 e_{-1} vac"};
          return;
        }
      }
      if (!E.apply_mode(r, -1, E.apply_mode(r, -1, vac)).is_zero()) {
        res.status = Status::kFail;
        res.counterexample = Counterexample{{{"r", r}}, "e_{-1} e_{-1} vac"};
        return;
      }
    }
    if (!(T.apply_mode(0, 0, T.apply_mode(0, 0, T.vacuum())) == T.vacuum() * S(2))) {
      detail::fail_with(res, "T_0^2 vac");
    }
  }));
  out.push_back(run_check("clifford/restriction-bound", win, [&](CheckResult& res) {
    for (const auto& m : T.basis(N)) {
      const auto w = FockVector<S>::basis(m);
      const int R = T.restriction_bound(0, w);
      for (int n = R; n <= R + 4; ++n) {
        if (!T.apply_mode(0, n, w).is_zero()) {
          res.status = Status::kFail;
          res.counterexample = Counterexample{{{"n", n}}, m.to_string()};
          return;
        }
      }
    }
  }));
  return out;
}

// --- dvir: structure coefficients, central term, relations, converse. ---

template <class S>
std::vector<CheckResult> dvir_suite(const S& p, const SuiteConfig& cfg) {
  const auto P = DVirParams<S>::q_minus_one(p);
  std::vector<CheckResult> out;
  out.push_back(run_check("dvir/f-coefficients", "l<=12", [&](CheckResult& res) {
    auto f = f_coefficients(P, 12);
    for (int l = 0; l <= 12; ++l) {
      if (!(f[l] == S(l == 0 ? 1 : 2))) {
        res.status = Status::kFail;
        res.counterexample = Counterexample{{{"l", l}}, to_string(f[l])};
        return;
      }
    }
  }));
  out.push_back(run_check("dvir/central-term", "m=1 vacuum", [&](CheckResult& res) {
    const auto M = t_fock(P);
    auto rep = vir_relation_check(M, P, 1, -1, M.vacuum(), 5);
    const S hand = S(2) * (p + p.inverse()) + S(4);
    if (!rep.holds() || !(rep.central == hand) || !(central_term(P, 1) == S(2) * (p + S(2) + p.inverse()))) {
      detail::fail_with(res, "central term " + to_string(rep.central) + " vs " + to_string(hand));
    }
  }));
  VirConfig vc;
  vc.grade = cfg.grade_or(6);
  vc.modes = cfg.modes;
  vc.jobs = cfg.jobs;
  const auto M = t_fock(P);
  for (auto& r : relation_checks("dvir/relations", FieldOperator<S>::mode_field(M, 0), P, vc)) out.push_back(std::move(r));
  for (auto& r : converse_suite(P, vc, cfg.margin)) out.push_back(std::move(r));
  return out;
}

template <class S>
PhiModuleConfig phi_config(const SuiteConfig& cfg) {
  PhiModuleConfig pc;
  pc.flavor_lo = cfg.flavor_lo;
  pc.flavor_hi = cfg.flavor_hi;
  pc.grade = cfg.grade_or(5);
  pc.zorder = cfg.zorder;
  pc.margin = cfg.margin;
  pc.jobs = cfg.jobs;
  pc.corrupt_character = cfg.corrupt_character;
  return pc;
}

// --- commutator: the commutator formula over all flavor pairs. ---

template <class S>
std::vector<CheckResult> commutator_suite(const S& p, const SuiteConfig& cfg) {
  const auto P = DVirParams<S>::q_minus_one(p);
  const FockModule<S> M = t_fock(P);
  const int N = cfg.grade_or(5);
  const auto basis = detail::basis_vectors(M, N);
  const std::optional<S> chi = cfg.corrupt_character ? std::optional<S>(p * p) : std::nullopt;
  const auto C = t_realization(M, p, cfg.flavor_lo - 1, cfg.flavor_hi + 1, chi);
  Window win;
  win.set("x1", -4, 4).set("x2", -4, 4);
  const FieldWindow fw{{-3, 3}, cfg.margin};
  const std::string tag = window_string(win) + " grade<=" + std::to_string(N);
  // (r, s, -1) is a formula check; (u, s, 1) checks that the non-neighbor
  // flavor u contributes no zero mode against s.
  std::vector<std::tuple<int, int, int>> tasks;
  for (int r = cfg.flavor_lo; r <= cfg.flavor_hi; ++r)
    for (int s = cfg.flavor_lo; s <= cfg.flavor_hi; ++s) tasks.push_back({r, s, -1});
  for (int s = cfg.flavor_lo; s <= cfg.flavor_hi; ++s)
    for (int u = C.flavor_lo; u <= C.flavor_hi; ++u)
      if (std::abs(u - s) != 1) tasks.push_back({u, s, 1});
  return parallel_map<CheckResult>(tasks.size(), cfg.jobs, [&](size_t i) {
    const auto [r, s, kind] = tasks[i];
    if (kind == 1) {
      return run_check("commutator/non-neighbor" + detail::pair_tag("u", r, "s", s),
                       detail::interval_window("x", fw.x) + " grade<=" + std::to_string(N), [&](CheckResult& res) {
        const auto ann = t_minimal_annihilator(p, r, s) * FactoredRational<S>::linear(S(1));
        for (const auto& w : basis) {
          auto md = ye_product(C.field(r), C.field(s), ann, w, 1, fw);
          if (md.k != 1 || !md.mode(0).terms().empty()) {
            detail::fail_with(res, "nonzero zero-mode on " + w.to_string());
            return;
          }
        }
      });
    }
    return run_check("commutator/formula" + detail::pair_tag("r", r, "s", s), tag, [&](CheckResult& res) {
      const auto L = t_locality_datum(C, r, s, t_minimal_annihilator(p, r, s));
      const std::vector<int> want{s - 1 - r, s + 1 - r};
      for (const auto& w : basis) {
        auto c = commutator_formula_check(C, r, s, L, w, win, cfg.margin);
        if (!c.check.holds) {
          res.status = Status::kFail;
          res.detail = c.check.note;
          res.counterexample = c.check.counterexample
                                   ? make_counterexample(c.check.vars, *c.check.counterexample, c.check.difference + " on " + w.to_string())
                                   : Counterexample{{}, c.check.note + " on " + w.to_string()};
          return;
        }
        if (c.contributing != want) {
          detail::fail_with(res, "contributing group elements differ from the neighbors of s");
          return;
        }
      }
    });
  });
}

template <class S>
std::vector<CheckResult> run_suite_over(const SuiteConfig& cfg, const S& p) {
  std::vector<CheckResult> out;
  auto append = [&](std::vector<CheckResult> v) {
    for (auto& r : v) out.push_back(std::move(r));
  };
  const bool all = cfg.suite == "all";
  if (all || cfg.suite == "formal-calc") append(formal_calc_suite(p));
  if (all || cfg.suite == "clifford") append(clifford_suite(p, std::min(cfg.grade_or(4), 6)));
  if (all || cfg.suite == "dvir") append(dvir_suite(p, cfg));
  if (all || cfg.suite == "phi-module") append(phi_module_suite(DVirParams<S>::q_minus_one(p), phi_config<S>(cfg)));
  if (all || cfg.suite == "commutator") append(commutator_suite(p, cfg));
  return out;
}

// Runs the configured suite; throws ConfigError on an invalid config.
inline std::vector<CheckResult> run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  if (cfg.field.is_symbolic()) return run_suite_over(cfg, RatFunc::p());
  return run_suite_over(cfg, cfg.field.p0);
}

}  // namespace phiq
