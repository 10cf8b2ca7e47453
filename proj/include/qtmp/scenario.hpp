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

#include <optional>
#include <string>
#include <vector>

#include "qtmp/lindblad.hpp"
#include "qtmp/operator.hpp"
#include "qtmp/qrm.hpp"

namespace qtmp {

enum class ReservoirKind { Kraus, Qrm };

struct ReservoirSpec {
  std::string label;
  ReservoirKind kind = ReservoirKind::Kraus;
  std::vector<Operator> kraus;          // kraus reservoirs
  std::optional<Operator> steady_state;  // kraus reservoirs, optional
  Operator reset_state;                  // qrm reservoirs
  double gamma = 0.0;                    // qrm reservoirs
  double lambda = 0.0;                   // weight of the common Hamiltonian
  std::optional<double> beta;
};

struct ScenarioTolerances {
  double comparison = 1e-9;  // closed form vs generic, identities
  double db = 1e-9;
  double kernel = 1e-9;
};

struct Scenario {
  std::string name;
  Index dimension = 0;
  Operator hamiltonian;
  std::vector<ReservoirSpec> reservoirs;
  Operator initial_state;
  std::vector<double> times;
  std::vector<double> alphas;
  ScenarioTolerances tolerances;
};

/// Parse errors (unreadable file, malformed JSON) throw ErrorKind::Parse;
/// semantic problems throw ErrorKind::Validation naming the field.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& name = "scenario");

struct BuiltModel {
  ReservoirDecomposition decomposition;
  DensityMatrix initial_state;
  /// Present when every reservoir is a QRM.
  std::optional<std::vector<QrmSpec>> qrm_parts;
};

BuiltModel build_model(const Scenario& scenario);

}  // namespace qtmp
