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
#include "phiq/fieldcalc.hpp"

namespace phiq {
namespace {

using Q = Rational;
using FR = FactoredRational<Q>;
const Q p0(2);

struct TFixture {
  FockModule<Q> M{CarSpec<Q>::t_spec(p0)};
  FieldOperator<Q> field(int r) const { return FieldOperator<Q>::mode_field(M, 0, power(p0, r)); }
  // Annihilator of the anticommutator deltas of (T(p^r x), T(p^s x)).
  FR minimal(int r, int s) const {
    return FR::from_roots({power(p0, s + 1 - r), power(p0, s - 1 - r)});
  }
  FR three_factor(int r, int s) const { return minimal(r, s) * FR::linear(-power(p0, s - r)); }
  LocalityDatum<Q> datum(int r, int s, const FR& p) const {
    return {field(r), field(s), {{field(s), field(r), FR::constant(Q(-1))}}, p};
  }
  std::vector<FockVector<Q>> basis(int N) const {
    std::vector<FockVector<Q>> out;
    for (const auto& m : M.basis(N)) out.push_back(FockVector<Q>::basis(m));
    return out;
  }
};

Window win2(long lo1, long hi1, long lo2, long hi2) {
  Window w;
  w.set("x1", lo1, hi1);
  w.set("x2", lo2, hi2);
  return w;
}

TEST(FieldCalcTest, ProductOnWindowCoefficients) {
  TFixture t;
  auto vac = t.M.vacuum();
  auto F = product_on_window(t.field(0), t.field(0), vac, win2(-3, 3, -3, 3));
  EXPECT_EQ(F.coeff({-1, 1}), vac * Q(5));  // 2(p + 1/p) at p = 2
  EXPECT_TRUE(F.coeff({1, 1}).is_zero());

  FockModule<Q> E(CarSpec<Q>::e_spec(Q(1)));
  auto e1 = FieldOperator<Q>::mode_field(E, 1), e2 = FieldOperator<Q>::mode_field(E, 2);
  auto G = product_on_window(e1, e2, E.vacuum(), win2(-3, 3, -3, 3));
  EXPECT_EQ(G.coeff({-1, 0}), E.vacuum() * Q(2));
}

TEST(FieldCalcTest, FieldScalingComposes) {
  TFixture t;
  auto a = t.field(1).scaled(Q(3)).scaled(Q(5));
  auto b = FieldOperator<Q>::mode_field(t.M, 0, Q(30));
  auto w = t.basis(3).back();
  EXPECT_FALSE(first_difference(a.apply(w, {-4, 4}), b.apply(w, {-4, 4})).has_value());
}

TEST(FieldCalcTest, CompatVerdicts) {
  TFixture t;
  auto vac = t.M.vacuum();
  auto win = win2(-8, 4, -4, 12);
  auto ok = compat_check(t.field(0), t.field(0), t.minimal(0, 0), vac, win);
  EXPECT_EQ(ok.verdict, Compat::kCompatibleOnWindow);
  EXPECT_GE(ok.bound, -6);
  auto bad = compat_check(t.field(0), t.field(0), FR::one(), vac, win);
  EXPECT_EQ(bad.verdict, Compat::kIncompatible);
  ASSERT_TRUE(bad.witness.has_value());
  auto tiny = compat_check(t.field(0), t.field(0), FR::one(), vac, win2(-2, 2, -2, 2));
  EXPECT_NE(tiny.verdict, Compat::kCompatibleOnWindow);
  EXPECT_THROW(compat_check(t.field(0), t.field(0), FR::constant(Q(0)), vac, win), ZeroPolynomial);
}

TEST(FieldCalcTest, LocalityWithThreeFactorAnnihilator) {
  TFixture t;
  auto win = win2(-5, 5, -5, 5);
  for (int r = -1; r <= 1; ++r) {
    for (int s = -1; s <= 1; ++s) {
      for (const auto& w : t.basis(2)) {
        EXPECT_TRUE(locality_check(t.datum(r, s, t.three_factor(r, s)), w, win)) << r << " " << s;
      }
    }
  }
}

TEST(FieldCalcTest, LocalityForFreeFermions) {
  FockModule<Q> E(CarSpec<Q>::e_spec(Q(1)));
  auto e = [&](int r) { return FieldOperator<Q>::mode_field(E, r); };
  LocalityDatum<Q> L{e(1), e(2), {{e(2), e(1), FR::constant(Q(-1))}}, FR::linear(Q(1))};
  auto win = win2(-4, 4, -4, 4);
  for (const auto& m : E.basis(2)) {
    EXPECT_TRUE(locality_check(L, FockVector<Q>::basis(m), win));
  }
  L.partners[0].f = FR::constant(Q(-2));
  EXPECT_FALSE(locality_check(L, E.vacuum(), win));
  auto d = locality_check_detail(L, E.vacuum(), win);
  ASSERT_TRUE(d.counterexample.has_value());
}

TEST(FieldCalcTest, LocalityFailsWithoutAnnihilator) {
  TFixture t;
  EXPECT_FALSE(locality_check(t.datum(0, 0, FR::one()), t.M.vacuum(), win2(-4, 4, -4, 4)));
}

TEST(FieldCalcTest, TopModeIsTwiceIdentity) {
  TFixture t;
  FieldWindow fw{{-3, 3}, 4};
  for (int s = -1; s <= 1; ++s) {
    for (int r : {s + 1, s - 1}) {
      // An extra (x - 1) makes mode 1 explicit as well.
      auto p = t.minimal(r, s) * FR::linear(Q(1));
      for (const auto& w : t.basis(3)) {
        auto md = ye_product(t.field(r), t.field(s), p, w, 2, fw);
        EXPECT_EQ(md.k, 2);
        auto m0 = md.mode(0);
        EXPECT_EQ(m0.coeff({0}), w * Q(2));
        EXPECT_EQ(m0.terms().size(), 1u);
        EXPECT_TRUE(md.mode(1).terms().empty());
        EXPECT_TRUE(md.mode(5).terms().empty());
      }
    }
  }
}

TEST(FieldCalcTest, NonNeighborNonnegativeModesVanish) {
  TFixture t;
  FieldWindow fw{{-3, 3}, 4};
  auto p = t.minimal(0, 0) * FR::linear(Q(1));
  for (const auto& w : t.basis(2)) {
    auto md = ye_product(t.field(0), t.field(0), p, w, 1, fw);
    EXPECT_TRUE(md.mode(0).terms().empty());
    // Fermionic square: the normally ordered product vanishes, its
    // derivative companion does not.
    EXPECT_TRUE(md.mode(-1).terms().empty());
    EXPECT_FALSE(md.mode(-2).terms().empty());
  }
}

TEST(FieldCalcTest, YeProductIndependentOfAnnihilator) {
  TFixture t;
  testing::Gen g(11);
  FieldWindow fw{{-2, 2}, 4};
  auto basis = t.basis(3);
  for (int trial = 0; trial < 20; ++trial) {
    int r = static_cast<int>(g.integer(-2, 2)), s = static_cast<int>(g.integer(-2, 2));
    const auto& w = basis[g.integer(0, static_cast<long>(basis.size()) - 1)];
    auto p = t.minimal(r, s);
    auto a = ye_product(t.field(r), t.field(s), p, w, 2, fw);
    auto b = ye_product(t.field(r), t.field(s), p * FR::linear(Q(3)), w, 2, fw);
    EXPECT_TRUE(a == b) << r << " " << s << " " << w.to_string();
  }
}

TEST(FieldCalcTest, YeProductEqualsResidueFormula) {
  TFixture t;
  testing::Gen g(12);
  FieldWindow fw{{-2, 2}, 4};
  auto basis = t.basis(3);
  for (int trial = 0; trial < 20; ++trial) {
    int r = static_cast<int>(g.integer(-2, 2)), s = static_cast<int>(g.integer(-2, 2));
    const auto& w = basis[g.integer(0, static_cast<long>(basis.size()) - 1)];
    auto L = t.datum(r, s, t.three_factor(r, s));
    auto ye = ye_product(L.a, L.b, L.p, w, 2, fw);
    auto res = residue_ye(L, w, 2, fw);
    EXPECT_TRUE(ye == res.modes) << r << " " << s << " " << w.to_string();
    EXPECT_FALSE(first_difference(res.top, ye.mode(ye.k - 1)).has_value());
  }
}

TEST(FieldCalcTest, ResidueTopModeClosedForm) {
  TFixture t;
  FieldWindow fw{{-3, 3}, 4};
  auto L = t.datum(1, 0, t.three_factor(1, 0));
  EXPECT_EQ(L.p.order_at(Q(1)), 1);
  for (const auto& w : t.basis(3)) {
    auto res = residue_ye(L, w, 1, fw);
    EXPECT_EQ(res.top.coeff({0}), w * Q(2));
    EXPECT_EQ(res.top.terms().size(), 1u);
  }
}

TEST(FieldCalcTest, ScalingNaturality) {
  TFixture t;
  FieldWindow fw{{-2, 2}, 4};
  const Q lambda(3);
  for (const auto& w : t.basis(2)) {
    auto p = t.minimal(1, 0);
    auto plain = ye_product(t.field(1), t.field(0), p, w, 2, fw);
    auto scaled = ye_product(t.field(1).scaled(lambda), t.field(0).scaled(lambda), p, w, 2, fw);
    for (int n = -3; n <= 0; ++n) {
      EXPECT_FALSE(first_difference(scaled.mode(n), rescale_var(plain.mode(n), "x", lambda)));
    }
  }
}

TEST(FieldCalcTest, ScaledModeExtraction) {
  TFixture t;
  FieldWindow fw{{-4, 4}, 4};
  auto L = t.datum(0, 0, t.minimal(0, 0));
  for (const auto& w : t.basis(2)) {
    auto r = scaled_mode_extract(L, {p0, p0.inverse(), Q(3)}, 0, w, win2(-4, 4, -4, 4), fw);
    EXPECT_TRUE(r.all_equal) << w.to_string();
    ASSERT_EQ(r.fit.size(), 2u);
    for (const auto& e : r.entries) {
      if (e.lambda == Q(3)) {
        EXPECT_TRUE(e.mode.terms().empty());
      } else {
        EXPECT_EQ(e.mode.coeff({0}), w * Q(2));
      }
    }
  }
}

TEST(FieldCalcTest, ScaledModeExtractionWithoutDefect) {
  FockModule<Q> E(CarSpec<Q>::e_spec(Q(1)));
  auto e = [&](int r) { return FieldOperator<Q>::mode_field(E, r); };
  LocalityDatum<Q> L{e(1), e(3), {{e(3), e(1), FR::constant(Q(-1))}}, FR::one()};
  auto r = scaled_mode_extract(L, {Q(1)}, 0, E.vacuum(), win2(-3, 3, -3, 3), FieldWindow{{-3, 3}, 4});
  EXPECT_TRUE(r.fit.empty());
  EXPECT_TRUE(r.all_equal);
}

CovariantStructure<Q> t_covariant(const TFixture& t, int lo, int hi, Q base = p0) {
  return {base, lo, hi, [&t](int r) { return t.field(r); }};
}

TEST(FieldCalcTest, CommutatorFormula) {
  TFixture t;
  auto C = t_covariant(t, -3, 3);
  auto win = win2(-4, 4, -4, 4);
  for (int r = -1; r <= 1; ++r) {
    for (int s = -1; s <= 1; ++s) {
      auto L = t.datum(r, s, t.minimal(r, s));
      for (const auto& w : t.basis(2)) {
        auto res = commutator_formula_check(C, r, s, L, w, win);
        EXPECT_TRUE(res.check.holds) << r << " " << s << " " << w.to_string() << res.check.note;
        EXPECT_EQ(res.contributing, (std::vector<int>{s - 1 - r, s + 1 - r}));
      }
    }
  }
}

TEST(FieldCalcTest, CommutatorFormulaDetectsWrongCharacter) {
  TFixture t;
  auto C = t_covariant(t, -3, 3, p0 * p0);
  auto res = commutator_formula_check(C, 1, 1, t.datum(1, 1, t.minimal(1, 1)), t.M.vacuum(),
                                      win2(-4, 4, -4, 4));
  EXPECT_FALSE(res.check.holds);
  EXPECT_THROW(commutator_formula_check(C, 5, 1, t.datum(1, 1, t.minimal(1, 1)), t.M.vacuum(),
                                        win2(-4, 4, -4, 4)),
               FlavorOutOfWindow);
}

TEST(FieldCalcTest, Associativity) {
  TFixture t;
  FieldWindow fw{{-3, 3}, 4};
  for (const auto& w : t.basis(3)) {
    EXPECT_TRUE(assoc_check(t.field(1), t.field(1), t.three_factor(1, 1), w, 4, fw, t.minimal(1, 1)).holds);
    EXPECT_TRUE(assoc_check(t.field(2), t.field(1), t.minimal(2, 1), w, 4, fw).holds);
  }
  auto id = FieldOperator<Q>::identity(t.M);
  for (const auto& w : t.basis(2)) {
    EXPECT_TRUE(assoc_check(id, t.field(0), FR::one(), w, 3, fw).holds);
    auto md = ye_product(id, t.field(0), FR::one(), w, 2, fw);
    EXPECT_FALSE(first_difference(md.mode(-1), t.field(0).apply(w, fw.x)).has_value());
  }
  auto missing = FR::linear(power(p0, 1));
  EXPECT_THROW(assoc_check(t.field(0), t.field(0), missing, t.M.vacuum(), 3, fw), IncompatibleFields);
}

TEST(FieldCalcTest, Covariance) {
  TFixture t;
  auto C = t_covariant(t, -2, 3);
  EXPECT_TRUE(covariance_check(C, 1, 1, 3, {-4, 4}).holds);
  EXPECT_TRUE(covariance_check(C, 1, 0, 3, {-4, 4}).holds);
  EXPECT_TRUE(covariance_check(C, -2, 5, 3, {-4, 4}).holds);
  auto wrong = t_covariant(t, -2, 3, p0 * p0);
  EXPECT_FALSE(covariance_check(wrong, 1, 1, 3, {-4, 4}).holds);
  EXPECT_THROW(covariance_check(C, 3, 1, 3, {-4, 4}), FlavorOutOfWindow);
}

TEST(FieldCalcTest, AnnihilatorSearchFindsMinimal) {
  TFixture t;
  auto C = t_covariant(t, -2, 3);
  FieldWindow fw{{-2, 2}, 4};
  auto ws = t.basis(1);
  auto p = find_annihilator(C, 1, 0, ws, fw);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->degree(), 2);
  EXPECT_EQ(p->order_at(Q(1)), 1);
  EXPECT_EQ(p->order_at(power(p0, -2)), 1);
}

TEST(FieldCalcTest, ModeTruncationMatchesOrderAtOne) {
  TFixture t;
  auto vac = t.M.vacuum();
  auto w = t.basis(2).back();
  FieldWindow fw{{-2, 2}, 4};
  auto p = t.minimal(1, 0);  // k = 1 at x = 1
  for (const auto& v : {vac, w}) {
    auto win = ye_window(t.field(1), t.field(0), p, v, fw);
    EXPECT_EQ(compat_check(t.field(1), t.field(0), p * FR::linear(Q(1)), v, win, 4, "x1", "x").verdict,
              Compat::kCompatibleOnWindow);
    EXPECT_EQ(compat_check(t.field(1), t.field(0), p, v, win, 4, "x1", "x").verdict, Compat::kCompatibleOnWindow);
    EXPECT_EQ(compat_check(t.field(1), t.field(0), FR::linear(power(p0, -2)), v, win, 4, "x1", "x").verdict,
              Compat::kIncompatible);
  }
}

}  // namespace
}  // namespace phiq
