// Copyright 2026 The tsleakscan Authors.
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

#ifndef TSLEAKSCAN_TOOLS_CLI_HPP_
#define TSLEAKSCAN_TOOLS_CLI_HPP_

#include <ostream>

namespace tsleakscan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Entry point for `tsleakscan scan|explain|viz`. Returns the process exit
// code: 0 on success, 1 on input/I/O failure, 2 on bad flags.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace tsleakscan::cli

#endif  // TSLEAKSCAN_TOOLS_CLI_HPP_
