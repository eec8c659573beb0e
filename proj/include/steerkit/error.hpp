// Copyright 2026 The steerkit Authors
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

namespace steerkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not match (matrix dimension, party count, arity).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input violates an operation precondition (not PSD, not normalized, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A correlation table is missing entries or has duplicated ones.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input. `pointer()` is a JSON pointer to the offending value.
class ParseError : public Error {
 public:
  ParseError(std::string pointer, const std::string& what)
      : Error(pointer.empty() ? what : pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

class SolverFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace steerkit
