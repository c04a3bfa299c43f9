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

#include <stdexcept>
#include <string>

namespace phiq {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PHIQ_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

PHIQ_DEFINE_ERROR(ZeroDenominator);
PHIQ_DEFINE_ERROR(PoleAtPoint);
PHIQ_DEFINE_ERROR(ZeroToNegativePower);
PHIQ_DEFINE_ERROR(ParseError);
PHIQ_DEFINE_ERROR(OutsideWindow);
PHIQ_DEFINE_ERROR(NotComputable);
PHIQ_DEFINE_ERROR(UnboundedExponent);
PHIQ_DEFINE_ERROR(RepeatedRoot);
PHIQ_DEFINE_ERROR(NonzeroConstantTerm);
PHIQ_DEFINE_ERROR(DiagonalDivergent);
PHIQ_DEFINE_ERROR(InsufficientWindow);
PHIQ_DEFINE_ERROR(NotDeltaSum);
PHIQ_DEFINE_ERROR(AnnihilationFails);
PHIQ_DEFINE_ERROR(WindowTooSmall);
PHIQ_DEFINE_ERROR(FlavorOutOfWindow);
PHIQ_DEFINE_ERROR(IncompatibleFields);
PHIQ_DEFINE_ERROR(ConfigError);
PHIQ_DEFINE_ERROR(ZeroPolynomial);

#undef PHIQ_DEFINE_ERROR

// Internal invariant violation; indicates a bug rather than bad input.
class LogicFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void check_invariant(bool ok, const char* what) {
  if (!ok) throw LogicFailure(what);
}

}  // namespace phiq
