// Copyright 2026 The steerkit Authors
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace steerkit {

enum ExitCode : int { kExitOk = 0, kExitVerdict = 1, kExitInput = 2, kExitSolver = 3 };

/// Runs one steerkit command. Results go to `out`; diagnostics and the run
/// manifest (one JSON line) go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// SHA-256 of a file as lowercase hex. Throws Error if unreadable.
std::string sha256_file(const std::string& path);

}  // namespace steerkit
