// Copyright 2026 The qtmp Authors
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

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "qtmp/qtmp.h"

namespace {

constexpr int kUsage = 2;

const char* kCommands = "steady, evolve, db-check, ttm, mgf, chain, qrm-demo, verify";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-time measurement statistics of Lindblad dynamics"};
  app.set_version_flag("--version", std::string(qtmp_version()));

  std::string command;
  std::string scenario_path;
  std::string out_path;
  double tol = 0.0;
  std::uint64_t seed = 0;
  bool matrix = false;

  app.add_option("command", command, std::string("One of: ") + kCommands)->required();
  app.add_option("--scenario", scenario_path, "Scenario file (JSON)")->required();
  app.add_option("--out", out_path, "CSV output path (stdout when omitted)");
  auto* tol_opt = app.add_option("--tol", tol, "Comparison tolerance (default: QTMP_TOL or the scenario value)")
                      ->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized property checks");
  app.add_flag("--matrix", matrix, "chain: write a label header and the rate matrix per reservoir");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  qtmp_scenario* scenario = nullptr;
  const qtmp_status status = qtmp_scenario_load(scenario_path.c_str(), &scenario);
  if (status != QTMP_OK) {
    std::fprintf(stderr, "error: %s\n", qtmp_last_error());
    return status == QTMP_ERR_VALIDATION ? 3 : kUsage;
  }

  qtmp_run_options options;
  qtmp_run_options_init(&options);
  if (*tol_opt) options.tol = tol;
  if (*seed_opt) options.seed = seed;
  options.chain_matrix = matrix ? 1 : 0;

  const int code = qtmp_run(scenario, command.c_str(), out_path.c_str(), &options);
  const std::string diagnostics = qtmp_last_error();
  if (!diagnostics.empty()) std::fputs(diagnostics.c_str(), stderr);
  qtmp_scenario_destroy(scenario);
  return code;
}
