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

#ifndef SIGAUCTION_TOOLS_CLI_H_
#define SIGAUCTION_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace sigauction::cli {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;      // I/O or runtime failure
inline constexpr int kExitUsage = 2;        // bad flags or invalid config
inline constexpr int kExitRoundsFailed = 3; // a cell had failed rounds

// Entry point for `sigauction <run|report|validate|stub-server> ...`.
// args excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace sigauction::cli

#endif  // SIGAUCTION_TOOLS_CLI_H_
