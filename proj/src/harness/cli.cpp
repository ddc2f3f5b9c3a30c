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

#include "gradissect/harness/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "gradissect/core/error.hpp"
#include "gradissect/harness/config.hpp"
#include "gradissect/harness/csv.hpp"
#include "gradissect/harness/experiments.hpp"
#include "gradissect/harness/svg.hpp"

namespace gradissect::harness {

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> steps;
  std::optional<std::string> out;
  std::optional<double> alpha;
  std::optional<std::string> method;
  std::optional<std::size_t> workers;
  bool plot = false;
  bool full = false;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "run a single seed");
  sub->add_option("--steps", o.steps, "number of optimizer steps");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--alpha", o.alpha, "single step size");
  sub->add_option("--method", o.method, "optimizer method (run only)");
  sub->add_option("--workers", o.workers, "worker threads (overrides GRADISSECT_WORKERS)");
  sub->add_flag("--plot", o.plot, "also write SVG plots");
}

ExperimentConfig load_config(ExperimentKind kind, const Options& o) {
  ExperimentConfig c = default_config(kind);
  if (!o.config_path.empty()) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_text_file(o.config_path));
    } catch (const nlohmann::json::exception& e) {
      throw ContractError(std::string("config: ") + e.what());
    }
    if (j.contains("experiment") && j.at("experiment").is_string() &&
        parse_experiment(j.at("experiment").get<std::string>()) != kind) {
      throw ContractError("config: experiment '" + j.at("experiment").get<std::string>() +
                          "' does not match subcommand '" + std::string(experiment_name(kind)) + "'");
    }
    c = config_from_json(j, kind);
  }
  if (o.seed) c.seeds = {*o.seed};
  if (o.steps) c.steps = *o.steps;
  if (o.out) c.out = *o.out;
  if (o.alpha) {
    if (kind == ExperimentKind::kCustomRun) {
      c.alphas = {*o.alpha};
    } else {
      for (auto& opt : c.optimizers) opt.alpha = *o.alpha;
    }
  }
  if (o.method) {
    const optimizers::Method m = optimizers::parse_method(*o.method);
    const optimizers::OptimizerConfig base = c.optimizers.front();
    c.optimizers = {base};
    c.optimizers.front().method = m;
  }
  c.validate();
  return c;
}

}  // namespace

std::size_t resolve_workers(std::optional<std::size_t> flag, const char* env_value) {
  if (flag) {
    require(*flag >= 1, "--workers must be at least 1");
    return *flag;
  }
  if (env_value != nullptr && *env_value != '\0') {
    const std::string_view s(env_value);
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc() || ptr != s.data() + s.size() || n == 0) {
      throw ContractError("GRADISSECT_WORKERS must be a positive integer, got '" + std::string(s) + "'");
    }
    return n;
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

int cli_main(int argc, char** argv) {
  CLI::App app{"gradissect: sign and variance adaptation experiments"};
  app.require_subcommand(1);
  Options o;
  const std::pair<const char*, const char*> subs[] = {
      {"run", "grid of optimizers x step sizes x seeds on one problem"},
      {"figure2", "sgd versus sign descent on generated quadratics"},
      {"factors", "variance adaptation factor curves"},
      {"theorem1", "convergence of idealized svag on a noisy convex quadratic"},
      {"wilson", "sign-based iterates on least-squares classification instances"},
      {"selftest", "acceptance checks"},
  };
  for (const auto& [name, desc] : subs) {
    CLI::App* sub = app.add_subcommand(name, desc);
    add_common(sub, o);
    if (std::string_view(name) == "selftest") sub->add_flag("--full", o.full, "include the figure2 check");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  const ExperimentKind kind = parse_experiment(app.get_subcommands().front()->get_name());
  ExperimentConfig config;
  std::size_t workers = 1;
  try {
    config = load_config(kind, o);
    workers = resolve_workers(o.workers, std::getenv("GRADISSECT_WORKERS"));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  ExperimentOutput out;
  try {
    out = run_experiment(config, workers, o.full);
    const std::filesystem::path dir(config.out);
    for (const OutputTable& t : out.tables) {
      const std::filesystem::path csv = dir / (t.stem + ".csv");
      write_text_file(csv, to_csv(t.records));
      std::cout << "wrote " << csv.string() << "\n";
      if (o.plot) {
        for (const auto& p : emit_svg(t.records, dir, t.stem, t.log_y)) std::cout << "wrote " << p.string() << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  for (const CheckResult& c : out.checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
  }
  for (const GridFailure& f : out.failures) std::cerr << "failed cell " << f.cell_key << ": " << f.message << "\n";
  return out.ok() ? kExitOk : kExitFailure;
}

}  // namespace gradissect::harness
