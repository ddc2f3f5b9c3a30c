// Copyright 2026 The gradissect Authors
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

#include <cstddef>
#include <optional>
#include <string_view>

namespace gradissect::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Subcommands run, figure2, factors, theorem1, wilson, selftest.
/// Returns kExitOk, kExitFailure (failed check or experiment error) or
/// kExitUsage (bad arguments or config).
int cli_main(int argc, char** argv);

/// --workers, else GRADISSECT_WORKERS, else the hardware thread count
/// (at least 1). Throws ContractError on a malformed value.
std::size_t resolve_workers(std::optional<std::size_t> flag, const char* env_value);

}  // namespace gradissect::harness
