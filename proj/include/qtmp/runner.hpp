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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qtmp/error.hpp"
#include "qtmp/scenario.hpp"

namespace qtmp {

/// Exit codes of the runner and the CLI.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitValidation = 3,
  kExitHypothesis = 4,
  kExitNumeric = 5,
};

int exit_code_for(ErrorKind kind);

struct RunOptions {
  std::optional<double> tol;  // overrides the comparison tolerance
  std::uint64_t seed = 20260417;
  bool chain_matrix = false;  // chain: label header + Q rows per reservoir
};

/// Default comparison tolerance: QTMP_TOL when set and valid, else the scenario's.
double effective_tolerance(const Scenario& scenario, const RunOptions& options);

const std::vector<std::string>& command_names();

/// Runs one command; CSV goes to out, diagnostics to err. Returns an exit code.
int run_command(const std::string& command, const Scenario& scenario, std::ostream& out, std::ostream& err,
                const RunOptions& options = {});

/// Loads the scenario, runs the command and writes to out_path (stdout when empty).
int run_scenario_file(const std::string& command, const std::string& scenario_path, const std::string& out_path,
                      std::ostream& err, const RunOptions& options = {});

}  // namespace qtmp
