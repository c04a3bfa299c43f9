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

#include <gtest/gtest.h>

#include "gen.hpp"
#include "oracles.hpp"
#include "phiq/distributions.hpp"
#include "phiq/scalar.hpp"

namespace phiq {
namespace {

using testing::Gen;
using Q = Rational;
using SQ = Series<Q>;
const RegionTag k12{"x1", "x2"};
const RegionTag k21{"x2", "x1"};

Window box2(long r) {
  Window w;
  w.set("x1", -r, r).set("x2", -r, r);
  return w;
}
SQ unit_x2() { return SQ::constant({"x2"}, Q(1)); }
SQ laurent(std::map<Exps, Q> t) { return SQ::polynomial({"x1", "x2"}, t); }

TEST(DeltaExpandTest, Examples) {
  RatFunc p = RatFunc::p();
  DeltaTerm<RatFunc> t{p, 0, Series<RatFunc>::constant({"x2"}, RatFunc(1))};
  auto s = delta_expand(t, box2(6));
  for (int m = -6; m <= 6; ++m) EXPECT_EQ(s.coeff({-m, m}), power(p, m));
  EXPECT_EQ(s.coeff({1, 1}), RatFunc(0));
  DeltaTerm<Q> u{Q(1), 1, unit_x2()};
  auto v = delta_expand(u, box2(6));
  for (int m = -6; m <= 6; ++m) EXPECT_EQ(v.coeff({-m, m}), Q(m));
}

TEST(DeltaExpandTest, ScaledPairMatchesAnticommutatorShape) {
  // 2(delta(p x2/x1) + delta(p^{-1} x2/x1)) at x1^{-m} x2^m is 2(p^m + p^{-m}).
  Q p0(2);
  DeltaTerm<Q> a{p0, 0, SQ::constant({"x2"}, Q(2))};
  DeltaTerm<Q> b{p0.inverse(), 0, SQ::constant({"x2"}, Q(2))};
  auto s = delta_expand(a, box2(5)) + delta_expand(b, box2(5));
  for (int m = -5; m <= 5; ++m) EXPECT_EQ(s.coeff({-m, m}), Q(2) * (power(p0, m) + power(p0, -m)));
}

TEST(DeltaExpandTest, ShiftedCoefficient) {
  // A(x2) = x2^3: coefficient of x1^{-n} x2^{n+3} is lambda^n.
  DeltaTerm<Q> t{Q(3), 0, SQ::polynomial({"x2"}, {{{3}, Q(1)}})};
  auto s = delta_expand(t, box2(8));
  EXPECT_EQ(s.coeff({-2, 5}), Q(9));
  EXPECT_EQ(s.coeff({2, 1}), Q(1, 9));
}

TEST(SubstituteDiagTest, Examples) {
  DeltaTerm<Q> t{Q(1), 0, unit_x2()};
  auto a = substitute_diag(laurent({{{1, 1}, Q(1)}}), t);
  EXPECT_EQ(a.coeff.coeff({2}), Q(1));
  EXPECT_EQ(a.coeff.terms().size(), 1u);
  auto b = substitute_diag(laurent({{{1, 0}, Q(1)}, {{0, 1}, Q(-1)}}), t);
  EXPECT_TRUE(b.coeff.terms().empty());
}

TEST(SubstituteDiagTest, DivergentDiagonalRejected) {
  DeltaTerm<Q> t{Q(1), 0, unit_x2()};
  SQ f = binom_expand<Q>(-1, "x1", "x2", k12, box2(10));
  EXPECT_THROW(substitute_diag(f, t), DiagonalDivergent);
}

SQ random_laurent(Gen& g, int terms, int r) {
  std::map<Exps, Q> t;
  for (int i = 0; i < terms; ++i) {
    t[{static_cast<int>(g.integer(-r, r)), static_cast<int>(g.integer(-r, r))}] += g.rational(6);
  }
  std::erase_if(t, [](const auto& kv) { return kv.second.is_zero(); });
  return laurent(t);
}
SQ random_x2(Gen& g, int terms, int r) {
  std::map<Exps, Q> t;
  for (int i = 0; i < terms; ++i) t[{static_cast<int>(g.integer(-r, r))}] += g.rational(6);
  std::erase_if(t, [](const auto& kv) { return kv.second.is_zero(); });
  return SQ::polynomial({"x2"}, t);
}

// Two-sided oracle: f(x1,x2) delta(x2/x1) = f(x2,x2) delta(x2/x1).
TEST(SubstituteDiagProperty, MatchesTwoSidedProduct) {
  Gen g(31);
  for (int it = 0; it < 30; ++it) {
    SQ f = random_laurent(g, 6, 3);
    DeltaTerm<Q> t{Q(1), 0, random_x2(g, 3, 2)};
    auto r = substitute_diag(f, t);
    SQ lhs = f * delta_expand(t, box2(18));
    SQ rhs = delta_expand(r, box2(12));
    EXPECT_TRUE(equal_on_window(lhs, rhs));
  }
}

TEST(AnnihilationTest, Examples) {
  EXPECT_TRUE(annihilation_check(Q(2), 1, 0, box2(20)));
  EXPECT_TRUE(annihilation_check(RatFunc::p(), 3, 2, box2(12)));
  EXPECT_FALSE(annihilation_check(Q(1), 1, 1, box2(20)));
  auto d = annihilation_check_detail(Q(2), 2, 1, box2(10));
  EXPECT_EQ(d.certified.get("x1"), (Interval{-8, 10}));
}

TEST(AnnihilationProperty, ExhaustiveSmallCases) {
  for (Q lambda : {Q(1), Q(2), Q(-3)}) {
    for (int k = 1; k <= 4; ++k) {
      for (int j = 0; j < k; ++j) EXPECT_TRUE(annihilation_check(lambda, k, j, box2(20)));
      EXPECT_FALSE(annihilation_check(lambda, k, k, box2(20)));
    }
  }
}

TEST(DeltaFitTest, SingleTermRoundtrip) {
  DeltaTerm<Q> t{Q(2), 0, SQ::constant({"x2"}, Q(3))};
  auto fit = delta_fit(delta_expand(t, box2(10)), std::vector<Q>{Q(2)}, 0);
  ASSERT_EQ(fit.size(), 1u);
  EXPECT_EQ(fit[0].lambda, Q(2));
  EXPECT_EQ(fit[0].j, 0);
  EXPECT_EQ(fit[0].coeff.coeff({0}), Q(3));
  EXPECT_EQ(fit[0].coeff.terms().size(), 1u);
}

TEST(DeltaFitTest, GeometricSeriesIsNotDeltaSum) {
  auto f = FactoredRational<Q>::linear(Q(1), -1);
  SQ d = shifted(iota_expand(f, "x1", "x2", k12, box2(10)), {0, -1});
  EXPECT_THROW(delta_fit(d.with_region({}), std::vector<Q>{Q(1)}, 1), NotDeltaSum);
  EXPECT_THROW(delta_fit(d.with_region({}), std::vector<Q>{Q(1), Q(2)}, 2), NotDeltaSum);
}

TEST(DeltaFitTest, ZeroSeriesGivesEmptyFit) {
  SQ zero({"x1", "x2"});
  zero.set_box(0, {-6, 6});
  zero.set_box(1, {-6, 6});
  EXPECT_TRUE(delta_fit(zero, std::vector<Q>{Q(1), Q(3), Q(-2)}, 3).empty());
  EXPECT_TRUE(delta_fit(zero, std::vector<Q>{}, 0).empty());
}

TEST(DeltaFitTest, ShortNonzeroDiagonalIsInsufficient) {
  DeltaTerm<Q> t{Q(2), 0, SQ::polynomial({"x2"}, {{{9}, Q(1)}})};
  EXPECT_THROW(delta_fit(delta_expand(t, box2(5)), std::vector<Q>{Q(2), Q(3)}, 1),
               InsufficientWindow);
}

TEST(DeltaFitProperty, RandomRoundtrips) {
  Gen g(32);
  for (int it = 0; it < 50; ++it) {
    std::vector<Q> lambdas;
    int nl = static_cast<int>(g.integer(1, 3));
    while (static_cast<int>(lambdas.size()) < nl) {
      Q l = g.nonzero_rational(3);
      if (std::find(lambdas.begin(), lambdas.end(), l) == lambdas.end()) lambdas.push_back(l);
    }
    const int jmax = static_cast<int>(g.integer(0, 3));
    SQ D({"x1", "x2"});
    std::map<std::pair<int, int>, SQ> truth;
    const Window w = box2(20);
    D.set_box(0, w.get("x1"));
    D.set_box(1, w.get("x2"));
    for (int li = 0; li < nl; ++li) {
      for (int j = 0; j <= jmax; ++j) {
        if (g.integer(0, 2) == 0) continue;
        SQ A = random_x2(g, 3, 5);
        if (A.terms().empty()) continue;
        truth[{li, j}] = A;
        D = D + delta_expand(DeltaTerm<Q>{lambdas[li], j, A}, w);
      }
    }
    auto fit = delta_fit(D, lambdas, jmax);
    EXPECT_EQ(fit.size(), truth.size());
    for (const auto& t : fit) {
      int li = static_cast<int>(std::find(lambdas.begin(), lambdas.end(), t.lambda) - lambdas.begin());
      auto it2 = truth.find({li, t.j});
      ASSERT_NE(it2, truth.end());
      EXPECT_TRUE(equal_on_window(t.coeff, it2->second));
    }
  }
}

TEST(DeltaDecomposeTest, SimplePoleGivesInverseLambda) {
  Q lambda(3);
  auto f = FactoredRational<Q>::linear(lambda, -1);
  SQ ab = iota_expand(f, "x1", "x2", k12, box2(12));
  SQ K = iota_expand(f, "x1", "x2", k21, box2(12));
  auto terms = delta_decompose(ab, K, FactoredRational<Q>::linear(lambda, 1));
  ASSERT_EQ(terms.size(), 1u);
  EXPECT_EQ(terms[0].lambda, lambda);
  EXPECT_EQ(terms[0].j, 0);
  EXPECT_EQ(terms[0].coeff.coeff({0}), lambda.inverse());
  EXPECT_EQ(terms[0].coeff.terms().size(), 1u);
}

TEST(DeltaDecomposeTest, EqualInputsGiveEmptyList) {
  SQ poly = laurent({{{1, 2}, Q(3)}, {{-2, 0}, Q(1)}}).restricted(box2(8));
  EXPECT_TRUE(delta_decompose(poly, poly, FactoredRational<Q>::one()).empty());
}

TEST(DeltaDecomposeTest, WrongAnnihilatorRejected) {
  auto f = FactoredRational<Q>::linear(Q(3), -1);
  SQ ab = iota_expand(f, "x1", "x2", k12, box2(12));
  SQ K = iota_expand(f, "x1", "x2", k21, box2(12));
  EXPECT_THROW(delta_decompose(ab, K, FactoredRational<Q>::linear(Q(2), 1)), AnnihilationFails);
}

TEST(DeltaDecomposeProperty, MatchesPartialFractionOracle) {
  Gen g(33);
  for (int it = 0; it < 20; ++it) {
    std::vector<Q> roots;
    std::vector<RootFactor<Q>> fs;
    int nr = static_cast<int>(g.integer(1, 2));
    while (static_cast<int>(roots.size()) < nr) {
      Q r = g.nonzero_rational(3);
      if (std::find(roots.begin(), roots.end(), r) != roots.end()) continue;
      roots.push_back(r);
      fs.push_back({r, -static_cast<int>(g.integer(1, 2))});
    }
    FactoredRational<Q> f(g.nonzero_rational(4), static_cast<int>(g.integer(-2, 2)), fs);
    auto ab = iota_expand(f, "x1", "x2", k12, box2(20));
    auto K = iota_expand(f, "x1", "x2", k21, box2(20));
    auto terms = delta_decompose(ab, K, f.inverse() * FactoredRational<Q>(f.constant_factor(), f.monomial_exponent(), {}));
    auto want = testing::predicted_delta_terms(f, roots);
    EXPECT_EQ(terms.size(), want.size());
    for (const auto& t : terms) {
      int li = static_cast<int>(std::find(roots.begin(), roots.end(), t.lambda) - roots.begin());
      auto w = want.find({li, t.j});
      ASSERT_NE(w, want.end());
      EXPECT_EQ(t.coeff.terms().size(), 1u);
      EXPECT_EQ(t.coeff.coeff({0}), w->second);
    }
  }
}

TEST(VanishingOrderTest, Examples) {
  SQ a = linear_power<Q>(3, Q(2), "x1", "x2", k12, Window{}) * laurent({{{1, 0}, Q(1)}});
  EXPECT_EQ(vanishing_order(a, Q(2)), 3);
  EXPECT_EQ(vanishing_order(laurent({{{1, 0}, Q(1)}, {{0, 1}, Q(-1)}}), Q(2)), 0);
  SQ zero({"x1", "x2"});
  EXPECT_THROW(vanishing_order(zero, Q(2)), WindowTooSmall);
}

TEST(VanishingOrderProperty, ConstructedInstances) {
  Gen g(34);
  for (int it = 0; it < 30; ++it) {
    Q lambda = g.nonzero_rational(4);
    SQ B;
    // Oracle for B(lambda x2, x2) != 0: evaluate at a few rational points.
    for (;;) {
      B = random_laurent(g, 5, 3);
      bool nonzero = false;
      for (Q t : {Q(2), Q(3, 7), Q(-5, 2)}) {
        Q v(0);
        for (const auto& [e, c] : B.terms()) v += c * power(lambda * t, e[0]) * power(t, e[1]);
        nonzero = nonzero || !v.is_zero();
      }
      if (nonzero) break;
    }
    int k = static_cast<int>(g.integer(0, 4));
    SQ A = linear_power<Q>(k, lambda, "x1", "x2", k12, Window{}) * B;
    EXPECT_EQ(vanishing_order(A, lambda), k);
    // Truncating to a window that still holds every term changes nothing.
    EXPECT_EQ(vanishing_order(A.restricted(box2(12)), lambda), k);
  }
}

TEST(ThreeTermTest, PureDelta) {
  SQ one = laurent({{{0, 0}, Q(1)}});
  SQ c = SQ::polynomial({"x0", "x2"}, {{{0, 0}, Q(1)}});
  EXPECT_TRUE(three_term_check(one, one, c, 0, 4, box2(5)));
}

TEST(ThreeTermTest, MonomialData) {
  SQ a = laurent({{{1, 1}, Q(1)}});
  const int zorder = 5;
  // C = x2^2 e^{x0}.
  SQ c({"x0", "x2"});
  for (int k = 0; k <= zorder; ++k) c.insert({k, 2}, factorial(k).inverse());
  c.set_box(0, {kNegInf, zorder});
  c.set_support_raw(0, {0, kPosInf});
  c.set_support_raw(1, {2, 2});
  EXPECT_TRUE(three_term_check(a, a, c, 0, zorder, box2(5)));
}

TEST(ThreeTermTest, CorruptedBFails) {
  SQ a = laurent({{{0, 0}, Q(1)}});
  SQ b = laurent({{{0, 0}, Q(1)}, {{1, -1}, Q(1)}});
  SQ c = SQ::polynomial({"x0", "x2"}, {{{0, 0}, Q(1)}});
  auto r = three_term_check_detail(a, b, c, 0, -3, 3, box2(5));
  EXPECT_FALSE(r.holds);
  EXPECT_FALSE(r.precondition);
  EXPECT_TRUE(r.counterexample.has_value());
}

// Adds 1 at e, widening the declared support so the corrupted series stays
// self-consistent.
SQ corrupt(SQ s, const Exps& e) {
  for (size_t i = 0; i < e.size(); ++i) s.set_support_raw(i, s.support(i).hull(Interval::point(e[i])));
  s.insert(e, Q(1));
  return s;
}

TEST(ThreeTermProperty, GeneratedDataPassesAndCorruptionFails) {
  Gen g(35);
  const Window check = box2(4);
  const Window gen = box2(30);
  const int zorder = 4;
  for (int it = 0; it < 12; ++it) {
    SQ F = random_laurent(g, 4, 2);
    if (F.terms().empty()) continue;
    int k = static_cast<int>(g.integer(0, 2));
    auto d = three_term_data(F, k, zorder + 2, gen);
    auto ok = three_term_check_detail(d.A, d.B, d.C, k, -zorder, zorder, check);
    EXPECT_TRUE(ok.holds) << "k=" << k;
    EXPECT_TRUE(ok.precondition);
    // Corrupt one coefficient of A, of B, and of C inside the window.
    const Exps ea{static_cast<int>(g.integer(-2, 2)), static_cast<int>(g.integer(-2, 2))};
    SQ A2 = corrupt(d.A, ea);
    EXPECT_FALSE(three_term_check_detail(A2, d.B, d.C, k, -zorder, zorder, check).holds);
    SQ B2 = corrupt(d.B, ea);
    EXPECT_FALSE(three_term_check_detail(d.A, B2, d.C, k, -zorder, zorder, check).holds);
    Exps ec(2);
    ec[d.C.require_index("x0")] = static_cast<int>(g.integer(-k, 1));
    ec[d.C.require_index("x2")] = static_cast<int>(g.integer(-2, 2));
    SQ C2 = corrupt(d.C, ec);
    EXPECT_FALSE(three_term_check_detail(d.A, d.B, C2, k, -zorder, zorder, check).holds);
  }
}

}  // namespace
}  // namespace phiq
