// Copyright 2026 The emdarp Authors
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

namespace emdarp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed document (bad JSON, wrong types, unknown keys, bad solution lines).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that breaks a domain invariant. The message starts with
// the offending field path, e.g. "requests[2].tw_hi: ...".
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// The external solver process could not be started.
class SpawnError : public Error {
 public:
  using Error::Error;
};

// Solver values that do not describe a route plan (fractional arcs, cycles).
class DecodeError : public Error {
 public:
  using Error::Error;
};

// A requested operation exceeds a hard size limit (e.g. oracle caps).
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace emdarp
