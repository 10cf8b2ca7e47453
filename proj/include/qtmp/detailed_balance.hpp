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

#include "qtmp/lindblad.hpp"
#include "qtmp/operator.hpp"

namespace qtmp {

enum class DbVariant { Rho, RhoS, Kms };

const char* to_string(DbVariant v);

struct DbReport {
  bool holds = false;
  double residual = 0.0;   // max self-adjointness defect over the matrix-unit basis
  double threshold = 0.0;  // tol * max(1, ||Phi||)
  DbVariant variant = DbVariant::Rho;
  double s = 1.0;
  double stationarity_residual = 0.0;  // max |L(rho)|
  std::optional<std::string> warning;
};

constexpr double kDefaultDbTol = 1e-9;

/// Self-adjointness of Phi for <A|B>_s = tr(rho^s A* rho^(1-s) B), checked
/// on all d^4 matrix-unit pairs. s = 1 is rho-DB, s = 1/2 is KMS-DB.
DbReport check_db(const DensityMatrix& rho, const Lindbladian& l, double s, double tol = kDefaultDbTol);

/// Adjointness defect of an arbitrary superoperator w.r.t. the rho_s inner product.
double rho_s_self_adjointness(const DensityMatrix& rho, const SuperOperatorMatrix& map, double s);

/// (L o Diag_rho - Diag_rho o L)(X), Diag_rho built from the spectral projectors of rho.
Operator pinch_commutation_defect(const DensityMatrix& rho, const Lindbladian& l, const Operator& x);

/// max over matrix units E of ||(L o Diag_rho - Diag_rho o L)(E)||_1
double check_pinch_commutation(const DensityMatrix& rho, const Lindbladian& l);

struct CommutationResiduals {
  double phi_unit = 0.0;     // ||[Phi(1), rho]||_1
  double hamiltonian = 0.0;  // ||[H, rho]||_1
};

CommutationResiduals commutation_identities(const DensityMatrix& rho, const Lindbladian& l);

/// Residual of the rho-self-adjointness (s = 1) of X -> -1/2 {Phi(1), X} + Phi(X).
double dissipator_self_adjointness(const DensityMatrix& rho, const Lindbladian& l);

struct KmsState {
  DensityMatrix state;
  double free_energy;
};

/// rho = exp(-beta (H - F)), F = -log tr exp(-beta H) / beta.
KmsState kms_state(const Operator& hamiltonian, double beta);

/// Qubit model satisfying KMS detailed balance but not rho-detailed balance.
struct FagnolaFixture {
  double kappa;
  double omega;
  double r;
  double s;
  double nu;
  Operator gamma;  // the single Kraus operator
  Lindbladian model;
  DensityMatrix rho;
};

FagnolaFixture fagnola_fixture(double kappa, double omega);

}  // namespace qtmp
