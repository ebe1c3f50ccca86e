// Copyright 2026 The sigauction Authors
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

#ifndef SIGAUCTION_ERROR_H_
#define SIGAUCTION_ERROR_H_

#include <stdexcept>
#include <string>

namespace sigauction {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration: bad parameters, bad strategy combinations,
// malformed config documents.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The auction mechanism cannot be executed on the given bids.
class MechanismError : public Error {
 public:
  using Error::Error;
};

// A value is outside its permitted domain (e.g. a bid outside [0, 1]).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Text could not be parsed into the expected structure.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Filesystem or persistence failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sigauction

#endif  // SIGAUCTION_ERROR_H_
