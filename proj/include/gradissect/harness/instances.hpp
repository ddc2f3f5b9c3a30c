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

#include "json.hpp"

#include "gradissect/problems/lsq_classification.hpp"
#include "gradissect/problems/noisy_convex.hpp"

namespace gradissect::harness {

/// {"X": [[...], ...], "y": [...], "c": number|null}, rows of X in order.
nlohmann::json instance_to_json(const problems::LsqClassification& p);
/// Throws ContractError on missing keys, ragged rows or a label outside {-1, +1}.
problems::LsqClassification lsq_instance_from_json(const nlohmann::json& j);

/// {"A": [[...], ...], "c_v": number, "m_v": number}.
nlohmann::json instance_to_json(const problems::NoisyConvexProblem& p);
problems::NoisyConvexProblem noisy_convex_from_json(const nlohmann::json& j);

}  // namespace gradissect::harness
