// Copyright 2026 The lightconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LIGHTCONV_TOOLS_CLI_H_
#define LIGHTCONV_TOOLS_CLI_H_

#include <ostream>

namespace lightconv::cli {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitParse = 2,  // bad command line, config file or input file content
  kExitIo = 3,
  kExitNumeric = 4,  // non-finite values, training divergence
  kExitInvalidArgument = 5,
};

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lightconv::cli

#endif  // LIGHTCONV_TOOLS_CLI_H_
