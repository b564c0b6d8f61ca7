// Copyright 2026 The socinf Authors.
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

#ifndef SOCINF_ERROR_HPP_
#define SOCINF_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace socinf {

// Invalid or inconsistent configuration. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (bad index, unnormalized
// distribution, length mismatch).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Non-finite value met during a forward or backward pass. Maps to CLI exit
// code 2.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace internal {

[[noreturn]] inline void contract_failure(const char* expr, const char* file,
                                          int line, const std::string& msg) {
  throw ContractError(std::string(file) + ":" + std::to_string(line) +
                      ": contract violated (" + expr + ")" +
                      (msg.empty() ? std::string() : ": " + msg));
}

}  // namespace internal
}  // namespace socinf

#define SOCINF_REQUIRE(cond, msg)                                         \
  do {                                                                    \
    if (!(cond)) {                                                        \
      ::socinf::internal::contract_failure(#cond, __FILE__, __LINE__, msg); \
    }                                                                     \
  } while (false)

#endif  // SOCINF_ERROR_HPP_
