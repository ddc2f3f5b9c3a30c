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

#include "gradissect/harness/instances.hpp"

#include <string>
#include <vector>

#include "gradissect/core/error.hpp"

namespace gradissect::harness {

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const char* key) {
  require(j.is_array() && !j.empty(), std::string(key) + ": expected a non-empty array of rows");
  const std::size_t cols = j.front().size();
  require(cols > 0, std::string(key) + ": empty row");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = j[i];
    require(row.is_array() && row.size() == cols, std::string(key) + ": ragged rows");
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k].get<double>();
    }
  }
  return m;
}

template <typename Fn>
auto guarded(const char* what, Fn fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

nlohmann::json instance_to_json(const problems::LsqClassification& p) {
  nlohmann::json j;
  j["X"] = matrix_to_json(p.X);
  j["y"] = std::vector<double>(p.y.begin(), p.y.end());
  j["c"] = p.c ? nlohmann::json(*p.c) : nlohmann::json(nullptr);
  return j;
}

problems::LsqClassification lsq_instance_from_json(const nlohmann::json& j) {
  return guarded("lsq instance", [&] {
    problems::LsqClassification p;
    p.X = matrix_from_json(j.at("X"), "X");
    const auto y = j.at("y").get<std::vector<double>>();
    require(y.size() == p.n(), "lsq instance: y has " + std::to_string(y.size()) + " entries for " +
                                   std::to_string(p.n()) + " rows");
    p.y = RealVector(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      require(y[i] == 1.0 || y[i] == -1.0, "lsq instance: labels must be -1 or +1");
      p.y[i] = y[i];
    }
    if (j.contains("c") && !j.at("c").is_null()) p.c = j.at("c").get<double>();
    return p;
  });
}

nlohmann::json instance_to_json(const problems::NoisyConvexProblem& p) {
  nlohmann::json j;
  j["A"] = matrix_to_json(p.A());
  j["c_v"] = p.noise().c_v;
  j["m_v"] = p.noise().m_v;
  return j;
}

problems::NoisyConvexProblem noisy_convex_from_json(const nlohmann::json& j) {
  return guarded("noisy convex instance", [&] {
    return problems::NoisyConvexProblem(matrix_from_json(j.at("A"), "A"),
                                        problems::NoiseModel{j.at("c_v").get<double>(), j.at("m_v").get<double>()});
  });
}

}  // namespace gradissect::harness
