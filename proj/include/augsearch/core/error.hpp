// Copyright 2026 The augsearch Authors
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

#ifndef AUGSEARCH_CORE_ERROR_HPP
#define AUGSEARCH_CORE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace augsearch {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Violated precondition or invariant.
class ContractError : public Error {
public:
  using Error::Error;
};

/// File and stream failures.
class IoError : public Error {
public:
  using Error::Error;
};

/// Malformed serialized documents.
class ParseError : public Error {
public:
  using Error::Error;
};

}  // namespace augsearch

#define AUGS_REQUIRE(cond, msg)                      \
  do {                                               \
    if (!(cond)) {                                   \
      throw ::augsearch::ContractError(msg);         \
    }                                                \
  } while (0)

#endif  // AUGSEARCH_CORE_ERROR_HPP
