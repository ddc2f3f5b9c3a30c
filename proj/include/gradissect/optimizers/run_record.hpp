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

#include <cstdint>
#include <string>
#include <vector>

namespace gradissect {

struct RunMeta {
  std::string experiment;
  std::string method;
  std::string problem_hash;
  std::uint64_t seed = 0;
  std::string config_digest;
};

struct RunRow {
  std::int64_t step = 0;
  double loss = 0.0;
  std::vector<double> aux;

  bool operator==(const RunRow&) const = default;
};

/// Time series of one seeded run. Steps strictly increase; losses are finite.
struct RunRecord {
  RunMeta meta;
  std::vector<std::string> aux_names;
  std::vector<RunRow> rows;

  /// Appends a row, enforcing the invariants above and the aux arity.
  void add_row(std::int64_t step, double loss, std::vector<double> aux = {});

  const RunRow& last() const { return rows.back(); }
};

}  // namespace gradissect
