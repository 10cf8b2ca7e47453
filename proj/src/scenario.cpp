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

#include "qtmp/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qtmp/error.hpp"

namespace qtmp {

namespace {

using json = nlohmann::json;

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  fail(ErrorKind::Validation, field + ": " + what);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) invalid(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid(field, "must be finite");
  return v;
}

Complex entry(const json& j, const std::string& field) {
  if (j.is_number()) return Complex(number(j, field), 0.0);
  if (j.is_array() && j.size() == 2) return Complex(number(j[0], field), number(j[1], field));
  invalid(field, "matrix entries must be numbers or [re, im] pairs");
}

Operator matrix(const json& j, const std::string& field, Index dim) {
  if (!j.is_array() || static_cast<Index>(j.size()) != dim)
    invalid(field, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  Operator m(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<Index>(row.size()) != dim)
      invalid(field, "row " + std::to_string(r) + " must have " + std::to_string(dim) + " entries");
    for (Index c = 0; c < dim; ++c) m(r, c) = entry(row[c], field);
  }
  return m;
}

Operator hermitian_matrix(const json& j, const std::string& field, Index dim) {
  Operator m = matrix(j, field, dim);
  if (!is_hermitian(m, 1e-10)) invalid(field, "matrix must be Hermitian");
  return hermitian_part(m);
}

Operator state_matrix(const json& j, const std::string& field, Index dim) {
  Operator m = hermitian_matrix(j, field, dim);
  try {
    return DensityMatrix(m).matrix();
  } catch (const Error& e) {
    invalid(field, e.what());
  }
}

std::vector<double> real_list(const json& j, const std::string& field) {
  if (!j.is_array()) invalid(field, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

const json& required(const json& j, const char* key, const std::string& field) {
  if (!j.contains(key)) invalid(field, "missing required field");
  return j.at(key);
}

ReservoirSpec reservoir(const json& j, const std::string& field, Index dim, std::size_t index) {
  if (!j.is_object()) invalid(field, "expected an object");
  ReservoirSpec r;
  r.label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : "r" + std::to_string(index);
  const bool has_kraus = j.contains("kraus");
  const bool has_qrm = j.contains("qrm");
  if (has_kraus == has_qrm) invalid(field, "exactly one of \"kraus\" or \"qrm\" is required");
  if (j.contains("beta")) {
    r.beta = number(j["beta"], field + ".beta");
    if (!(*r.beta > 0.0)) invalid(field + ".beta", "must be positive");
  }
  if (has_kraus) {
    r.kind = ReservoirKind::Kraus;
    const json& list = j["kraus"];
    if (!list.is_array()) invalid(field + ".kraus", "expected a list of matrices");
    for (std::size_t k = 0; k < list.size(); ++k)
      r.kraus.push_back(matrix(list[k], field + ".kraus[" + std::to_string(k) + "]", dim));
    if (j.contains("steady_state")) r.steady_state = state_matrix(j["steady_state"], field + ".steady_state", dim);
  } else {
    r.kind = ReservoirKind::Qrm;
    const json& q = j["qrm"];
    if (!q.is_object()) invalid(field + ".qrm", "expected an object");
    r.reset_state = state_matrix(required(q, "T", field + ".qrm.T"), field + ".qrm.T", dim);
    r.gamma = number(required(q, "gamma", field + ".qrm.gamma"), field + ".qrm.gamma");
    if (!(r.gamma > 0.0)) invalid(field + ".qrm.gamma", "must be positive");
  }
  return r;
}

std::optional<double> reservoir_weight(const json& j, const std::string& field) {
  if (j.contains("qrm") && j["qrm"].is_object() && j["qrm"].contains("lambda"))
    return number(j["qrm"]["lambda"], field + ".qrm.lambda");
  if (j.contains("hamiltonian_weight")) return number(j["hamiltonian_weight"], field + ".hamiltonian_weight");
  return std::nullopt;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, name + ": " + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::Parse, name + ": top level must be an object");

  Scenario s;
  s.name = doc.contains("name") && doc["name"].is_string() ? doc["name"].get<std::string>() : name;
  const double dim = number(required(doc, "dimension", "dimension"), "dimension");
  if (dim < 1 || dim != std::floor(dim) || dim > 64) invalid("dimension", "must be an integer in [1, 64]");
  s.dimension = static_cast<Index>(dim);
  s.hamiltonian = hermitian_matrix(required(doc, "hamiltonian", "hamiltonian"), "hamiltonian", s.dimension);

  const json& reservoirs = required(doc, "reservoirs", "reservoirs");
  if (!reservoirs.is_array() || reservoirs.empty()) invalid("reservoirs", "at least one reservoir is required");
  std::vector<std::optional<double>> weights;
  for (std::size_t k = 0; k < reservoirs.size(); ++k) {
    const std::string field = "reservoirs[" + std::to_string(k) + "]";
    s.reservoirs.push_back(reservoir(reservoirs[k], field, s.dimension, k));
    weights.push_back(reservoir_weight(reservoirs[k], field));
  }
  bool any_weight = false;
  for (const auto& w : weights) any_weight = any_weight || w.has_value();
  double weight_sum = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    s.reservoirs[k].lambda = weights[k] ? *weights[k] : (any_weight ? 0.0 : 1.0 / static_cast<double>(weights.size()));
    weight_sum += s.reservoirs[k].lambda;
  }
  if (std::abs(weight_sum - 1.0) > 1e-9) invalid("reservoirs", "hamiltonian weights must sum to 1");

  s.initial_state = state_matrix(required(doc, "initial_state", "initial_state"), "initial_state", s.dimension);

  s.times = doc.contains("times") ? real_list(doc["times"], "times") : std::vector<double>{0.0, 1.0};
  if (s.times.empty()) invalid("times", "at least one time is required");
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    if (s.times[k] < 0.0) invalid("times", "times must be nonnegative");
    if (k > 0 && s.times[k] <= s.times[k - 1]) invalid("times", "times must be ascending");
  }
  s.alphas = doc.contains("alphas") ? real_list(doc["alphas"], "alphas") : std::vector<double>{0.0, 0.5, 1.0};
  if (s.alphas.empty()) invalid("alphas", "at least one alpha is required");

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) invalid("tolerances", "expected an object");
    auto read = [&](const char* key, double& target) {
      if (!t.contains(key)) return;
      target = number(t[key], std::string("tolerances.") + key);
      if (!(target > 0.0)) invalid(std::string("tolerances.") + key, "must be positive");
    };
    read("comparison", s.tolerances.comparison);
    read("db", s.tolerances.db);
    read("kernel", s.tolerances.kernel);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, "cannot open scenario file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  std::string name = path;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  return parse_scenario(text.str(), name);
}

BuiltModel build_model(const Scenario& scenario) {
  std::vector<ReservoirPart> parts;
  std::vector<QrmSpec> qrm;
  bool all_qrm = true;
  for (const auto& r : scenario.reservoirs) {
    if (r.kind == ReservoirKind::Qrm) {
      QrmSpec spec{scenario.hamiltonian, DensityMatrix(r.reset_state), r.gamma, r.lambda};
      Lindbladian l = build_qrm(spec);
      Lindbladian labelled(l.hamiltonian(), l.kraus(), r.label);
      parts.push_back(ReservoirPart{labelled, qrm_steady_state(spec), r.beta});
      qrm.push_back(spec);
    } else {
      all_qrm = false;
      Lindbladian l(r.lambda * scenario.hamiltonian, r.kraus, r.label);
      DensityMatrix plus = r.steady_state ? DensityMatrix(*r.steady_state) : unique_steady_state(l, scenario.tolerances.kernel);
      parts.push_back(ReservoirPart{l, plus, r.beta});
    }
  }
  BuiltModel out{make_reservoir_decomposition(std::move(parts)), DensityMatrix(scenario.initial_state), std::nullopt};
  if (all_qrm) out.qrm_parts = std::move(qrm);
  return out;
}

}  // namespace qtmp
