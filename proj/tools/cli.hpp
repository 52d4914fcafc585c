// Copyright 2026 The privkit Authors
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

#pragma once

#include <string>
#include <vector>

namespace privkit::cli {

/// Batch front-end. args excludes the program name, e.g.
/// {"greedy", "--toy", "m=100,n=5", "--alpha", "0.3"}.
/// Exit codes: 0 success, 1 usage error, 2 runtime error.
int run(const std::vector<std::string>& args);

int run(int argc, const char* const* argv);

}  // namespace privkit::cli
