// Copyright 2026 The Authors.
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

#ifndef PROPHET_ERRORS_H_
#define PROPHET_ERRORS_H_

#include <stdexcept>
#include <string>

namespace prophet {

// Malformed caller input: unknown element, violated precondition, bad
// parameter.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// The request is well-formed but exceeds a size budget (exhaustive
// enumeration, game tree, DP table).
class RefusedError : public std::runtime_error {
 public:
  explicit RefusedError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace prophet

#endif  // PROPHET_ERRORS_H_
