// Copyright 2026 The popnet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "popnet/bn_io.hpp"
#include "popnet/errors.hpp"
#include "popnet/generator.hpp"
#include "popnet/plan.hpp"
#include "popnet/report.hpp"
#include "popnet/rng.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitRuntime = 3;

std::uint64_t recorded_seed(const fs::path& dir) {
  if (!fs::exists(dir / "report.txt")) return 0;
  auto kv = popnet::parse_key_values(popnet::read_text_file(dir / "report.txt"));
  auto it = kv.find("population.seed");
  return it == kv.end() ? 0 : std::stoull(it->second);
}

int print_stats(const fs::path& dir) {
  popnet::ExportedNetwork net = popnet::read_exported_network(dir);
  std::uint64_t seed = popnet::RandomStream(recorded_seed(dir)).split("stats").seed();
  popnet::NetworkSummary summary = popnet::summarize_network(net, seed);
  std::cout << popnet::format_stats("all", summary.collapsed);
  for (const auto& [type, s] : summary.per_type) std::cout << popnet::format_stats(type, s);
  return kExitOk;
}

int validate(const fs::path& plan_path) {
  popnet::GenerationPlan plan = popnet::load_plan(plan_path);
  auto diagnostics = popnet::validate_plan(plan);
  for (const auto& d : diagnostics) std::cout << popnet::format_diagnostic(d) << "\n";
  if (popnet::has_errors(diagnostics)) return kExitInvalid;
  if (diagnostics.empty()) std::cout << "plan is consistent\n";
  return kExitOk;
}

int generate(const fs::path& plan_path, const popnet::PlanOverrides& overrides,
             bool stats_only) {
  popnet::GenerationPlan plan =
      popnet::with_overrides(popnet::load_plan(plan_path), overrides);
  if (stats_only) return print_stats(plan.output);
  for (const auto& d : popnet::validate_plan(plan))
    std::cerr << popnet::format_diagnostic(d) << "\n";
  popnet::GenerationResult result = popnet::run_generation(plan, &std::cerr);
  for (const fs::path& p : popnet::export_generation(result, plan, plan.output))
    std::cerr << "wrote " << p.string() << "\n";
  std::cout << popnet::format_report(result.report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic population and multiplex social network generator"};
  app.require_subcommand(1);

  fs::path plan_path, stats_dir;
  popnet::PlanOverrides overrides;
  bool stats_only = false;

  auto* gen = app.add_subcommand("generate", "Generate a population and its networks");
  gen->add_option("plan", plan_path, "Generation plan file")
      ->required()
      ->check(CLI::ExistingFile);
  gen->add_option("--seed", overrides.seed, "Override the plan seed");
  gen->add_option("--population", overrides.population, "Override the population size");
  gen->add_option("--out", overrides.output, "Override the output directory");
  gen->add_flag("--stats-only", stats_only,
                "Recompute statistics from the files already in the output directory");

  auto* val = app.add_subcommand("validate", "Check a plan without generating");
  val->add_option("plan", plan_path, "Generation plan file")
      ->required()
      ->check(CLI::ExistingFile);

  auto* stats = app.add_subcommand("stats", "Statistics of an exported network");
  stats->add_option("dir", stats_dir, "Directory written by generate")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return generate(plan_path, overrides, stats_only);
    if (*val) return validate(plan_path);
    return print_stats(stats_dir);
  } catch (const popnet::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const popnet::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
