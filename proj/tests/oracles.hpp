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

#include "phiq/closed_form.hpp"

namespace phiq::testing {

// The partial-fraction prediction is computed without delta_fit; tests
// compare delta_decompose against it.
template <class S>
auto predicted_delta_terms(const FactoredRational<S>& f, const std::vector<S>& roots) {
  return closed_form_delta_terms(f, roots);
}

}  // namespace phiq::testing
