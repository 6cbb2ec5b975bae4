// Copyright 2026 The phasebound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace phasebound {

/// An argument lies outside the domain where a formula is defined
/// (negative photon number, η = 1 for a loss-only bound, ...).
class DomainError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// Malformed input object: non-normalized distribution, invalid prior, bad config.
class InvalidInput : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine produced a result violating its own tolerance
/// (negative eigenvalue, negative outcome density, ...).
class NumericalFailure : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace phasebound
