// Copyright 2026 The mull Authors
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

#ifndef MULL_ERROR_HPP
#define MULL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mull {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input: formulas, space files, matrix files, expressions.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A computation ran out of its configured budget (size cap, iterations).
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class IterationBudgetExceeded : public BudgetExceeded {
 public:
  using BudgetExceeded::BudgetExceeded;
};

class CarrierTooLarge : public BudgetExceeded {
 public:
  using BudgetExceeded::BudgetExceeded;
};

class DimensionCap : public BudgetExceeded {
 public:
  using BudgetExceeded::BudgetExceeded;
};

/// Arguments do not live over the same index set or carrier.
class CarrierMismatch : public Error {
 public:
  using Error::Error;
};

using IndexMismatch = CarrierMismatch;

/// A model does not support a constructor or a capability is missing.
class NotSupported : public Error {
 public:
  using Error::Error;
};

class NotInvertible : public Error {
 public:
  using Error::Error;
};

/// A caller obligation (monotonicity, commuting square, ...) was refuted.
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace mull

#endif  // MULL_ERROR_HPP
