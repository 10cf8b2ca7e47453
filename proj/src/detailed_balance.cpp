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

#include "qtmp/detailed_balance.hpp"

#include <algorithm>
#include <cmath>

#include "qtmp/error.hpp"

namespace qtmp {

namespace {

// <A|B>_s = vec(A)* W vec(B) with W = (rho^s)^T kron rho^(1-s).
Eigen::MatrixXcd weight_matrix(const DensityMatrix& rho, double s) {
  return kron(rho.power(s).transpose(), rho.power(1.0 - s));
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

void require_faithful(const DensityMatrix& rho, const char* context) {
  if (!rho.faithful()) fail(ErrorKind::InvalidArgument, std::string(context) + ": rho must be faithful");
}

}  // namespace

const char* to_string(DbVariant v) {
  switch (v) {
    case DbVariant::Rho: return "rho";
    case DbVariant::RhoS: return "rho_s";
    case DbVariant::Kms: return "kms";
  }
  return "?";
}

double rho_s_self_adjointness(const DensityMatrix& rho, const SuperOperatorMatrix& map, double s) {
  require_faithful(rho, "rho_s_self_adjointness");
  if (!(s >= 0.0 && s <= 1.0)) fail(ErrorKind::InvalidArgument, "s must lie in [0, 1]");
  if (map.dim != rho.dim()) fail(ErrorKind::InvalidArgument, "rho_s_self_adjointness: dimension mismatch");
  const Eigen::MatrixXcd w = weight_matrix(rho, s);
  return (w * map.matrix - map.matrix.adjoint() * w).cwiseAbs().maxCoeff();
}

DbReport check_db(const DensityMatrix& rho, const Lindbladian& l, double s, double tol) {
  require_faithful(rho, "check_db");
  require_same_dim(rho.matrix(), l.hamiltonian(), "check_db");
  const auto phi = cp_superoperator(l);

  DbReport report;
  report.s = s;
  report.variant = s == 1.0 ? DbVariant::Rho : (s == 0.5 ? DbVariant::Kms : DbVariant::RhoS);
  report.residual = rho_s_self_adjointness(rho, phi, s);
  report.threshold = tol * std::max(1.0, spectral_norm(phi.matrix));
  report.holds = report.residual <= report.threshold;
  report.stationarity_residual = max_abs(apply_generator(l, rho.matrix()));
  if (report.stationarity_residual > tol * std::max(1.0, generator_norm(l))) {
    report.warning = "rho is not stationary for L; detailed balance presumes L(rho) = 0";
  }
  return report;
}

Operator pinch_commutation_defect(const DensityMatrix& rho, const Lindbladian& l, const Operator& x) {
  require_faithful(rho, "check_pinch_commutation");
  const auto decomp = spectral_decompose(rho.matrix());
  return apply_generator(l, pinch(decomp, x)) - pinch(decomp, apply_generator(l, x));
}

double check_pinch_commutation(const DensityMatrix& rho, const Lindbladian& l) {
  require_faithful(rho, "check_pinch_commutation");
  require_same_dim(rho.matrix(), l.hamiltonian(), "check_pinch_commutation");
  const auto decomp = spectral_decompose(rho.matrix());
  const Index d = rho.dim();
  double worst = 0.0;
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) {
      const Operator e = matrix_unit(d, a, b);
      const Operator defect = apply_generator(l, pinch(decomp, e)) - pinch(decomp, apply_generator(l, e));
      worst = std::max(worst, trace_norm(defect));
    }
  }
  return worst;
}

CommutationResiduals commutation_identities(const DensityMatrix& rho, const Lindbladian& l) {
  require_faithful(rho, "commutation_identities");
  require_same_dim(rho.matrix(), l.hamiltonian(), "commutation_identities");
  return {trace_norm(commutator(l.kraus_sum(), rho.matrix())),
          trace_norm(commutator(l.hamiltonian(), rho.matrix()))};
}

double dissipator_self_adjointness(const DensityMatrix& rho, const Lindbladian& l) {
  const auto dissipator = superoperator_from_map(l.dim(), [&](const Operator& x) {
    return Operator(-0.5 * anticommutator(l.kraus_sum(), x) + cp_map(l, x));
  });
  return rho_s_self_adjointness(rho, dissipator, 1.0);
}

KmsState kms_state(const Operator& hamiltonian, double beta) {
  if (!(beta > 0.0)) fail(ErrorKind::InvalidArgument, "kms_state: beta must be positive");
  if (!is_hermitian(hamiltonian, 1e-10 * std::max(1.0, max_abs(hamiltonian)))) {
    fail(ErrorKind::InvalidArgument, "kms_state: hamiltonian is not Hermitian");
  }
  const auto eig = eigen_hermitian(hamiltonian);
  const double ground = eig.values(0);
  double z = 0.0;  // tr exp(-beta (H - ground))
  for (Index k = 0; k < eig.values.size(); ++k) z += std::exp(-beta * (eig.values(k) - ground));
  const double free_energy = ground - std::log(z) / beta;
  const Operator rho = hermitian_function(eig, [&](double e) { return std::exp(-beta * (e - free_energy)); });
  StateTolerances tol;
  tol.trace = 1e-9;
  return {DensityMatrix(rho, tol), free_energy};
}

FagnolaFixture fagnola_fixture(double kappa, double omega) {
  if (!(kappa > 0.0 && kappa < 1.0)) fail(ErrorKind::InvalidArgument, "fagnola_fixture: kappa must lie in (0, 1)");
  const Complex i(0.0, 1.0);
  const double c = std::sqrt(1.0 - kappa * kappa);
  const double s = omega * (1.0 + kappa) / (1.0 - kappa);
  const double r = omega * std::sqrt((1.0 + kappa) / (1.0 - kappa));
  const Operator h = kappa * omega * pauli(1);
  const Operator gamma = c * pauli(0) + i * r * pauli(1) + s * pauli(2) + pauli(3);
  const Operator rho = 0.5 * (pauli(0) - c * pauli(3));
  return {kappa, omega, r, s, 0.5 * (1.0 - c), gamma, Lindbladian(h, {gamma}, "fagnola"), DensityMatrix(rho)};
}

}  // namespace qtmp
