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

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "qtmp/error.hpp"
#include "qtmp/runner.hpp"
#include "qtmp/scenario.hpp"

using namespace qtmp;

namespace {

const std::string kQubit = R"({
  "dimension": 2,
  "hamiltonian": [[0, 0], [0, 1]],
  "reservoirs": [{"label": "reset", "qrm": {"T": [[0.75, 0], [0, 0.25]], "gamma": 1.0}}],
  "initial_state": [[0.6, [0.2, 0.1]], [[0.2, -0.1], 0.4]],
  "times": [0.1, 1.0],
  "alphas": [-1, 0, 1]
})";

std::string scenario_path(const std::string& file) { return std::string(QTMP_SCENARIO_DIR) + "/" + file; }

ErrorKind parse_kind(const std::string& text, std::string* message = nullptr) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream l(line);
    while (std::getline(l, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::string& command, const Scenario& s, const RunOptions& options = {}) {
  std::ostringstream out, err;
  const int code = run_command(command, s, out, err, options);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("scenario parsing") {
  const Scenario s = parse_scenario(kQubit, "inline");
  CHECK(s.name == "inline");
  CHECK(s.dimension == 2);
  CHECK(s.initial_state(0, 1) == Complex(0.2, 0.1));
  CHECK(s.reservoirs.size() == 1);
  CHECK(s.reservoirs[0].kind == ReservoirKind::Qrm);
  CHECK(s.reservoirs[0].lambda == 1.0);
  CHECK(s.tolerances.comparison == 1e-9);
  const BuiltModel m = build_model(s);
  REQUIRE(m.qrm_parts.has_value());
  CHECK(test::max_diff(m.decomposition.parts[0].steady_state.matrix(), test::diag({0.75, 0.25})) < 1e-15);

  const Scenario f = load_scenario(scenario_path("fagnola.json"));
  CHECK(f.name == "fagnola");
  CHECK(f.reservoirs[0].kind == ReservoirKind::Kraus);
  CHECK_FALSE(build_model(f).qrm_parts.has_value());
}

TEST_CASE("scenario validation messages") {
  std::string message;
  CHECK(parse_kind("{not json", &message) == ErrorKind::Parse);
  CHECK(parse_kind("[1, 2]") == ErrorKind::Parse);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), Error);

  CHECK(parse_kind(replace(kQubit, "[[0, 0], [0, 1]]", "[[0, 1], [0, 1]]"), &message) == ErrorKind::Validation);
  CHECK(message == "hamiltonian: matrix must be Hermitian");

  CHECK(parse_kind(replace(kQubit, "[0.1, 1.0]", "[1.0, 0.1]"), &message) == ErrorKind::Validation);
  CHECK(message == "times: times must be ascending");
  CHECK(parse_kind(replace(kQubit, "[0.1, 1.0]", "[-1.0, 0.1]"), &message) == ErrorKind::Validation);
  CHECK(message == "times: times must be nonnegative");

  CHECK(parse_kind(replace(kQubit, "\"gamma\": 1.0", "\"gamma\": -1.0"), &message) == ErrorKind::Validation);
  CHECK(message == "reservoirs[0].qrm.gamma: must be positive");

  CHECK(parse_kind(replace(kQubit, "[[0.75, 0], [0, 0.25]]", "[[1.75, 0], [0, -0.75]]"), &message) ==
        ErrorKind::Validation);
  CHECK(message.rfind("reservoirs[0].qrm.T:", 0) == 0);

  CHECK(parse_kind(replace(kQubit, "\"dimension\": 2", "\"dimension\": 3"), &message) == ErrorKind::Validation);
  CHECK(message == "hamiltonian: expected a 3x3 matrix");

  CHECK(parse_kind(replace(kQubit, "\"gamma\": 1.0}", "\"gamma\": 1.0, \"lambda\": 0.5}"), &message) ==
        ErrorKind::Validation);
  CHECK(message == "reservoirs: hamiltonian weights must sum to 1");

  CHECK(parse_kind(replace(kQubit, "\"qrm\"", "\"other\""), &message) == ErrorKind::Validation);
  CHECK(parse_kind(replace(kQubit, "[0.6, [0.2, 0.1]]", "[0.6, [0.2, 0.1, 0.0]]"), &message) == ErrorKind::Validation);
  CHECK(message == "initial_state: matrix entries must be numbers or [re, im] pairs");
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorKind::Parse) == kExitUsage);
  CHECK(exit_code_for(ErrorKind::Validation) == kExitValidation);
  CHECK(exit_code_for(ErrorKind::InvalidArgument) == kExitValidation);
  CHECK(exit_code_for(ErrorKind::Hypothesis) == kExitHypothesis);
  CHECK(exit_code_for(ErrorKind::Numeric) == kExitNumeric);
  const Scenario s = parse_scenario(kQubit);
  const Run bad = run("nope", s);
  CHECK(bad.code == kExitUsage);
  CHECK_FALSE(bad.err.empty());
}

TEST_CASE("tolerance precedence") {
  Scenario s = parse_scenario(kQubit);
  s.tolerances.comparison = 1e-8;
  CHECK(effective_tolerance(s, {}) == 1e-8);
  RunOptions o;
  o.tol = 1e-6;
  CHECK(effective_tolerance(s, o) == 1e-6);
}

TEST_CASE("mgf command") {
  const Scenario s = parse_scenario(kQubit);
  const Run r = run("mgf", s);
  REQUIRE(r.code == kExitOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 1 + 2 * 3);
  CHECK(rows[0] == std::vector<std::string>{"reservoir", "label", "t", "alpha", "direct", "deformed", "classical", "note"});
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double direct = std::stod(rows[k][4]);
    const double deformed = std::stod(rows[k][5]);
    const double classical = std::stod(rows[k][6]);
    CHECK(std::abs(direct - deformed) < 1e-9 * std::max(1.0, direct));
    CHECK(std::abs(direct - classical) < 1e-9 * std::max(1.0, direct));
    if (std::stod(rows[k][3]) == 0.0) CHECK(std::abs(direct - 1.0) < 1e-12);
  }
}

TEST_CASE("command outputs") {
  const Scenario s = load_scenario(scenario_path("qubit_qrm.json"));
  for (const auto& command : command_names()) {
    CAPTURE(command);
    const Run a = run(command, s);
    CHECK(a.code == kExitOk);
    CHECK_FALSE(a.out.empty());
    const Run b = run(command, s);
    CHECK(a.out == b.out);
  }
  const auto steady = csv_rows(run("steady", s).out);
  CHECK(steady[0] == std::vector<std::string>{"quantity", "index", "row", "col", "re", "im"});
  const auto db = csv_rows(run("db-check", s).out);
  REQUIRE(db.size() == 4);
  for (std::size_t k = 1; k < db.size(); ++k) CHECK(db[k][4] == "true");
  const auto chain = csv_rows(run("chain", s).out);
  CHECK(chain[0] == std::vector<std::string>{"reservoir", "label", "quantity", "i", "j", "value", "note"});
  RunOptions matrix;
  matrix.chain_matrix = true;
  const auto block = csv_rows(run("chain", s, matrix).out);
  REQUIRE(block.size() >= 3);
  CHECK(std::stod(block[1][0]) == doctest::Approx(-0.25));
  CHECK(std::stod(block[2][1]) == doctest::Approx(-0.75));
}

TEST_CASE("verify on the shipped scenarios") {
  for (const char* file : {"qubit_qrm.json", "two_reservoir_qrm.json", "fagnola.json"}) {
    CAPTURE(file);
    const Scenario s = load_scenario(scenario_path(file));
    const Run r = run("verify", s);
    CHECK(r.code == kExitOk);
    const auto rows = csv_rows(r.out);
    CHECK(rows[0] == std::vector<std::string>{"check", "status", "value", "threshold", "detail"});
    for (std::size_t k = 1; k < rows.size(); ++k) {
      CAPTURE(rows[k][0]);
      CHECK(rows[k][1] != "fail");
    }
  }
}

TEST_CASE("hypothesis failures") {
  const Scenario f = load_scenario(scenario_path("fagnola.json"));
  const Run ttm = run("ttm", f);
  CHECK(ttm.code == kExitHypothesis);
  CHECK(ttm.out.find("hypothesis") != std::string::npos);
  CHECK(run("qrm-demo", f).code == kExitHypothesis);
}

TEST_CASE("numeric failure under an unattainable tolerance") {
  const Scenario s = load_scenario(scenario_path("qubit_qrm.json"));
  RunOptions o;
  o.tol = 1e-20;
  CHECK(run("verify", s, o).code == kExitNumeric);
}
