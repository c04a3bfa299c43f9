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

#include "phiq/fock.hpp"

namespace phiq {
namespace {

using Q = Rational;
const RatFunc p = RatFunc::p();

FockVector<Q> e_vec(std::vector<Generator> gens) { return FockVector<Q>::basis(Monomial{gens}); }

TEST(FockTest, CliffordRelationsOnVacuumVectors) {
  FockModule<Q> E(CarSpec<Q>::e_spec(Q(1)));
  auto vac = E.vacuum();
  auto e2 = E.apply_mode(2, -1, vac);
  EXPECT_EQ(E.apply_mode(1, 0, e2), vac * Q(2));
  auto er = E.apply_mode(1, -1, vac);
  EXPECT_TRUE(E.apply_mode(1, -1, er).is_zero());
  EXPECT_EQ(E.apply_mode(3, 0, e2), vac * Q(2));
  EXPECT_TRUE(E.apply_mode(4, 0, e2).is_zero());
  EXPECT_THROW(E.apply_mode(6, -1, vac), FlavorOutOfWindow);
}

TEST(FockTest, TContraction) {
  FockModule<RatFunc> T(CarSpec<RatFunc>::t_spec(p));
  auto vac = T.vacuum();
  EXPECT_EQ(T.apply_mode(0, 1, T.apply_mode(0, -1, vac)), vac * (RatFunc(2) * (p + p.inverse())));
  auto t0 = T.apply_mode(0, 0, vac);
  EXPECT_EQ(T.apply_mode(0, 0, t0), vac * RatFunc(2));
  EXPECT_TRUE(T.apply_mode(0, 1, vac).is_zero());
}

TEST(FockTest, SignsFollowGeneratorOrder) {
  FockModule<Q> E(CarSpec<Q>::e_spec(Q(1)));
  auto vac = E.vacuum();
  // e^(2)_{-1} e^(1)_{-1} vac = - e^(1)_{-1} e^(2)_{-1} vac.
  auto a = E.apply_mode(2, -1, E.apply_mode(1, -1, vac));
  auto b = E.apply_mode(1, -1, E.apply_mode(2, -1, vac));
  EXPECT_EQ(a, -b);
  EXPECT_EQ(b, e_vec({{1, -1}, {2, -1}}));
}

TEST(FockTest, AnticommutatorExamples) {
  FockModule<Q> E(CarSpec<Q>::e_spec(Q(1)));
  EXPECT_TRUE(E.anticommutator_check({1, 0}, {2, -1}, 4));
  EXPECT_EQ(E.spec().pairing({1, 0}, {2, -1}), Q(2));
  EXPECT_TRUE(E.anticommutator_check({1, 0}, {3, -1}, 4));
  EXPECT_EQ(E.spec().pairing({1, 0}, {3, -1}), Q(0));
  FockModule<RatFunc> T(CarSpec<RatFunc>::t_spec(p));
  EXPECT_TRUE(T.anticommutator_check({0, 0}, {0, 0}, 4));
  EXPECT_EQ(T.spec().pairing({0, 0}, {0, 0}), RatFunc(4));
}

// Independent count: subsets of {1..N} with a given sum.
std::vector<int> distinct_part_counts(int N) {
  std::vector<int> c(N + 1, 0);
  for (int mask = 0; mask < (1 << N); ++mask) {
    int s = 0;
    for (int i = 0; i < N; ++i)
      if (mask & (1 << i)) s += i + 1;
    if (s <= N) ++c[s];
  }
  return c;
}

TEST(FockTest, GradedDimensions) {
  FockModule<Q> T(CarSpec<Q>::t_spec(Q(2)));
  auto q = distinct_part_counts(8);
  auto d = T.graded_dimensions(8);
  for (int g = 0; g <= 8; ++g) EXPECT_EQ(d[g], 2 * q[g]) << g;
  EXPECT_EQ(T.graded_dimensions(4), (std::vector<int>{2, 2, 2, 4, 4}));
  FockModule<Q> E1(CarSpec<Q>::e_spec(Q(1), 0, 0));
  EXPECT_EQ(E1.graded_dimensions(3), (std::vector<int>{1, 1, 1, 2}));
  auto b = T.basis(0);
  EXPECT_NE(std::find(b.begin(), b.end(), Monomial{}), b.end());
}

TEST(FockTest, ApplyFieldExamples) {
  FockModule<Q> E(CarSpec<Q>::e_spec(Q(1)));
  auto s = E.apply_field(1, Q(1), E.vacuum(), {0, 3});
  EXPECT_EQ(s.coeff({0}), e_vec({{1, -1}}));
  EXPECT_EQ(s.coeff({1}), e_vec({{1, -2}}));
  EXPECT_EQ(s.coeff({3}), e_vec({{1, -4}}));
  EXPECT_TRUE(s.coeff({-1}).is_zero());
  FockModule<RatFunc> T(CarSpec<RatFunc>::t_spec(p));
  auto t = T.apply_field(0, RatFunc(1), T.vacuum(), {-3, 3});
  auto tm1 = FockVector<RatFunc>::basis(Monomial{{{0, -1}}});
  EXPECT_EQ(t.coeff({1}), tm1);
  // a(lambda x) = sum lambda^{-n-nu} a_n x^{-n-nu}: x^1 carries lambda^1 T_{-1}.
  auto tp = T.apply_field(0, p, T.vacuum(), {-3, 3});
  EXPECT_EQ(tp.coeff({1}), tm1 * p);
  EXPECT_THROW(T.apply_field(0, p, T.vacuum(), {0, kPosInf}), InsufficientWindow);
}

template <class S>
void car_consistency(const FockModule<S>& M, int modes, int N) {
  auto basis = M.basis(N);
  std::vector<Generator> gens;
  for (int r : M.spec().flavors())
    for (int n = -modes; n <= modes; ++n) gens.push_back({r, n});
  for (size_t a = 0; a < gens.size(); ++a) {
    for (size_t b = a; b < gens.size(); ++b) {
      const S pr = M.spec().pairing(gens[a], gens[b]);
      EXPECT_EQ(pr, M.spec().pairing(gens[b], gens[a]));
      for (const auto& m : basis) {
        FockVector<S> w = FockVector<S>::basis(m);
        auto ab = M.apply_mode(gens[a].flavor, gens[a].mode, w);
        auto lhs = M.apply_mode(gens[b].flavor, gens[b].mode, ab) +
                   M.apply_mode(gens[a].flavor, gens[a].mode,
                                M.apply_mode(gens[b].flavor, gens[b].mode, w));
        ASSERT_EQ(lhs, w * pr) << "generators " << a << "," << b << " on " << m.to_string();
        if (a == b) {
          ASSERT_EQ(M.apply_mode(gens[a].flavor, gens[a].mode, ab), w * (pr * S(Rational(1, 2))));
        }
      }
    }
  }
}

TEST(FockProperty, CarConsistencyE) {
  car_consistency(FockModule<Q>(CarSpec<Q>::e_spec(Q(1), -2, 3)), 5, 5);
  car_consistency(FockModule<Q>(CarSpec<Q>::e_spec(Q(2), -2, 3)), 5, 5);
}

TEST(FockProperty, CarConsistencyT) {
  car_consistency(FockModule<RatFunc>(CarSpec<RatFunc>::t_spec(p)), 5, 5);
  car_consistency(FockModule<Q>(CarSpec<Q>::t_spec(Q(2))), 5, 5);
}

TEST(FockProperty, RestrictionBoundIsHonored) {
  FockModule<Q> E(CarSpec<Q>::e_spec(Q(1), -2, 3));
  for (const auto& m : E.basis(5)) {
    auto w = FockVector<Q>::basis(m);
    for (int r : E.spec().flavors()) {
      int N = E.restriction_bound(r, w);
      for (int n = N; n <= N + 10; ++n) EXPECT_TRUE(E.apply_mode(r, n, w).is_zero());
    }
  }
  FockModule<Q> T(CarSpec<Q>::t_spec(Q(2)));
  for (const auto& m : T.basis(6)) {
    auto w = FockVector<Q>::basis(m);
    int N = T.restriction_bound(0, w);
    for (int n = N; n <= N + 10; ++n) EXPECT_TRUE(T.apply_mode(0, n, w).is_zero());
    if (N > 1) {
      EXPECT_FALSE(T.apply_mode(0, N - 1, w).is_zero());
    }
  }
}

TEST(FockProperty, ScaledFieldIsRescaledField) {
  FockModule<RatFunc> T(CarSpec<RatFunc>::t_spec(p));
  FockModule<Q> E(CarSpec<Q>::e_spec(Q(1), -2, 3));
  for (const auto& m : T.basis(4)) {
    auto w = FockVector<RatFunc>::basis(m);
    for (RatFunc lam : {p, p * p, p.inverse(), RatFunc(Rational(-3, 2))}) {
      auto a = T.apply_field(0, lam, w, {-8, 8});
      auto b = rescale_var(T.apply_field(0, RatFunc(1), w, {-8, 8}), "x", lam);
      EXPECT_TRUE(equal_on_window(a, b));
    }
  }
  for (const auto& m : E.basis(3)) {
    auto w = FockVector<Q>::basis(m);
    auto a = E.apply_field(1, Q(3), w, {-8, 8});
    auto b = rescale_var(E.apply_field(1, Q(1), w, {-8, 8}), "x", Q(3));
    EXPECT_TRUE(equal_on_window(a, b));
  }
}

}  // namespace
}  // namespace phiq
