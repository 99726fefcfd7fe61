// Copyright 2026 The QTSL Authors
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

#ifndef QTSL_CLI_HPP
#define QTSL_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace qtsl::cli {

/// Exit codes of the qtsl tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFalse = 1,
    kExitUsage = 2,
    kExitData = 3,
};

/// Runs one qtsl invocation. `args` excludes the program name.
int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace qtsl::cli

#endif
