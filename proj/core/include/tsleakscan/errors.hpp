// Copyright 2026 The tsleakscan Authors.
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

#ifndef TSLEAKSCAN_ERRORS_HPP_
#define TSLEAKSCAN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace tsleakscan {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input could not be parsed under its declared format.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Input parsed but violates a collection invariant (duplicate id, missing
// value under the reject policy, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation's precondition.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A report refers to series that are not part of the collection.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tsleakscan

#endif  // TSLEAKSCAN_ERRORS_HPP_
