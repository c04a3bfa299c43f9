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

#include <map>
#include <utility>
#include <vector>

#include "phiq/distributions.hpp"
#include "phiq/factored.hpp"
#include "phiq/polynomial.hpp"

namespace phiq {

// Delta terms of iota12(f) - iota21(f) predicted in closed form from the
// partial fractions of f = x^m * g(x), x = x1/x2:
//   [iota12 - iota21] (x - lambda)^{-j} = sum_n P_j(n) lambda^{n-j} x^{-n},
//   P_j(n) = (n-1)(n-2)...(n-j+1)/(j-1)!,
// and the factor x^m shifts n by m. Result: (lambda, power of n) -> scalar
// coefficient of x2^0.
template <class S>
std::map<std::pair<int, int>, S> closed_form_delta_terms(const FactoredRational<S>& f,
                                                       const std::vector<S>& roots) {
  const int m = f.monomial_exponent();
  FactoredRational<S> g(f.constant_factor(), 0, f.factors());
  std::map<std::pair<int, int>, S> out;
  for (const auto& t : partial_fractions(g)) {
    int li = 0;
    while (!(roots[li] == t.lambda)) ++li;
    QPoly P(Rational(1));
    for (int s = 1; s <= t.j - 1; ++s) P = P * QPoly(std::vector<Rational>{Rational(m - s), Rational(1)});
    P = P.scaled(factorial(t.j - 1).inverse());
    S scale = t.coeff * power(t.lambda, m - t.j);
    for (int k = 0; k <= P.degree(); ++k) {
      if (P.coeff(k).is_zero()) continue;
      auto key = std::make_pair(li, k);
      auto it = out.find(key);
      S v = scale * S(P.coeff(k));
      if (it == out.end()) out.emplace(key, v);
      else it->second += v;
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

}  // namespace phiq
