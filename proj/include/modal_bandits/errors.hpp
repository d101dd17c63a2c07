// Copyright 2026 The Modal Bandits Authors
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

namespace modal {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter violates an operation's precondition (k out of range, n < K, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Point dimensions disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Input data is inconsistent with the request (unknown arm id, short stream).
class DataError : public Error {
 public:
  using Error::Error;
};

// A distribution violates the modal-structure requirements (flat plateau,
// merged peaks, bad weights).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace modal
