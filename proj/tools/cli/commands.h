// Copyright 2026 The cogdb Authors
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

#ifndef COGDB_TOOLS_COMMANDS_H_
#define COGDB_TOOLS_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "cogdb/error.h"

namespace cogdb::cli {

enum ExitCode {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitIo = 4,
  kExitQuery = 5,
};

int exit_code_for(ErrorCode code);

// Runs the `cogdb` command line. Data goes to `out`, diagnostics to `err`;
// the REPL reads statements from `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace cogdb::cli

#endif  // COGDB_TOOLS_COMMANDS_H_
