// Copyright 2026 The MOO Ranking Authors
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

#ifndef MOO_ERROR_H_
#define MOO_ERROR_H_

#include <stdexcept>
#include <string>

namespace moo {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: wrong dimensions, out-of-range values, broken invariants.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// A feasible set turned out to be empty.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Numerical breakdown: singular factorizations, indefinite matrices where a
// definite one is required, eigen-solver failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace moo

#endif  // MOO_ERROR_H_
