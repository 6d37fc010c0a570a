// Copyright 2026 The MixTalk Authors.
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


// The mixtalk command line: run | rank (alias report) | distill | replay |
// audit. Usage errors return 2 and runtime errors return 1.

#ifndef MIXTALK_CLI_H_
#define MIXTALK_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace mixtalk {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Hex SHA-256 of a file's bytes. Throws Error when unreadable.
std::string Sha256File(const std::string& path);

}  // namespace mixtalk

#endif  // MIXTALK_CLI_H_
