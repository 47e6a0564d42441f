/*
 * Copyright 2026 The rankbound Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RANKBOUND_CLI_HPP_
#define RANKBOUND_CLI_HPP_

#include <iosfwd>

namespace rankbound {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;      // usage or validation error
inline constexpr int kExitCheckFailed = 2;  // a verification gate failed

// Runs one `rankbound` command line (argv[0] is the program name).
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace rankbound

#endif  // RANKBOUND_CLI_HPP_
