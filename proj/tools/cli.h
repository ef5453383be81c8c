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

#ifndef PROPHET_TOOLS_CLI_H_
#define PROPHET_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace prophet::cli {

enum ExitCode {
  kOk = 0,
  kConfigError = 1,
  kRefused = 2,
  kPropertyFailure = 3,
};

// Entry point shared by the binary and the tests. args excludes the program
// name.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// Writes contents to dir/name through a temporary file and a rename.
void WriteAtomically(const std::string& dir, const std::string& name,
                     const std::string& contents);

}  // namespace prophet::cli

#endif  // PROPHET_TOOLS_CLI_H_
