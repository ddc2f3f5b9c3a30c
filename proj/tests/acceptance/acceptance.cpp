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

// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance                 all criteria 1..13
//   acceptance --criterion 7   a single criterion (repeatable)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "gradissect/harness/config.hpp"
#include "gradissect/harness/csv.hpp"
#include "gradissect/harness/selftest.hpp"

namespace fs = std::filesystem;
namespace hs = gradissect::harness;

namespace {

constexpr int kDeterminismCriterion = 13;

struct Line {
  bool pass = false;
  std::string detail;
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + GRADISSECT_CLI + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Runs a subcommand twice with different worker counts and compares every
// CSV byte for byte.
Line repeat_and_compare(const std::string& subcommand, const std::string& tag, const fs::path& root) {
  const fs::path a = root / (tag + "_w1");
  const fs::path b = root / (tag + "_w3");
  const int ca = run_cli(subcommand + " --workers 1 --out \"" + a.string() + "\"");
  const int cb = run_cli(subcommand + " --workers 3 --out \"" + b.string() + "\"");
  if (ca != cb) return {false, subcommand + ": exit codes differ (" + std::to_string(ca) + " vs " + std::to_string(cb) + ")"};
  if (ca != 0 && ca != 1) return {false, subcommand + ": exit code " + std::to_string(ca)};
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().extension() != ".csv") continue;
    const fs::path other = b / entry.path().filename();
    if (!fs::exists(other)) return {false, subcommand + ": " + other.string() + " missing"};
    if (hs::read_text_file(entry.path()) != hs::read_text_file(other)) {
      return {false, subcommand + ": " + entry.path().filename().string() + " differs between runs"};
    }
    ++compared;
  }
  if (compared == 0) return {false, subcommand + ": no CSV written"};
  return {true, subcommand + ": " + std::to_string(compared) + " CSV identical"};
}

Line determinism() {
  const fs::path root = fs::temp_directory_path() / "gradissect_acceptance_determinism";
  fs::remove_all(root);
  const Line s = repeat_and_compare("selftest", "selftest", root);
  const Line f = repeat_and_compare("figure2 --seed 7", "figure2", root);
  fs::remove_all(root);
  return {s.pass && f.pass, s.detail + "; " + f.detail};
}

double golden_rotated_band() {
  const fs::path p = fs::path(GRADISSECT_SOURCE_DIR) / "tests" / "golden" / "figure2_config.json";
  return hs::config_from_json(nlohmann::json::parse(hs::read_text_file(p)), hs::ExperimentKind::kFigure2)
      .figure2_rotated_band;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  std::size_t workers = 1;
  app.add_option("--criterion", only, "run only these criteria")->check(CLI::Range(1, kDeterminismCriterion));
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  const std::set<int> selected(only.begin(), only.end());
  auto wanted = [&](int c) { return selected.empty() || selected.count(c) > 0; };

  hs::SelftestContext ctx;
  ctx.workers = workers;
  ctx.figure2_rotated_band = golden_rotated_band();

  bool all_pass = true;
  auto report = [&](int criterion, const std::string& name, bool pass, const std::string& detail, double secs) {
    all_pass = all_pass && pass;
    std::printf("criterion %d %s: %s %s (%.2f s)\n", criterion, name.c_str(), pass ? "PASS" : "FAIL",
                detail.c_str(), secs);
    std::fflush(stdout);
  };

  for (const hs::SelfCheck& check : hs::check_registry()) {
    if (!wanted(check.criterion)) continue;
    const auto start = std::chrono::steady_clock::now();
    hs::CheckOutcome o;
    try {
      o = check.run(ctx);
    } catch (const std::exception& e) {
      o = {false, 0.0, std::string("exception: ") + e.what()};
    }
    report(check.criterion, check.name, o.pass, o.detail,
           std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  if (wanted(kDeterminismCriterion)) {
    const auto start = std::chrono::steady_clock::now();
    const Line l = determinism();
    report(kDeterminismCriterion, "determinism", l.pass, l.detail,
           std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return all_pass ? 0 : 1;
}
