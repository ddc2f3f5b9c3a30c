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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gradissect/optimizers/run_record.hpp"

namespace gradissect::harness {

/// 17 significant digits, "%.17g" semantics, locale independent.
std::string format_real(double x);

/// Columns experiment,method,seed,step,loss followed by the records' aux
/// names, LF line endings. A leading "# config_digest=<hex>" line is written
/// when the first record carries a digest. All records must share aux names.
std::string to_csv(std::span<const RunRecord> records);

/// Inverse of to_csv up to meta fields that are not serialized (problem
/// hash). Consecutive rows with equal (experiment, method, seed) form one
/// record. Throws ContractError on malformed input.
std::vector<RunRecord> parse_csv(std::string_view text);

/// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace gradissect::harness
