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

#include "helpers.hpp"
#include "qtmp/detailed_balance.hpp"
#include "qtmp/error.hpp"

using namespace qtmp;
using qtmp::test::diag;
using qtmp::test::max_diff;

TEST_CASE("db holds for the commuting reset model") {
  const auto spec = test::qubit_qrm();
  const Lindbladian l = build_qrm(spec);
  for (double s : {0.0, 0.5, 1.0}) CHECK(check_db(spec.reset_state, l, s).holds);
  CHECK(check_pinch_commutation(spec.reset_state, l) < 1e-10);
  const auto r = commutation_identities(spec.reset_state, l);
  CHECK(r.phi_unit < 1e-10);
  CHECK(r.hamiltonian < 1e-10);
}

TEST_CASE("db for the free dynamics") {
  const Lindbladian l(diag({0, 1}), {});
  const DensityMatrix rho(diag({0.3, 0.7}));
  CHECK(check_db(rho, l, 1.0).holds);
  CHECK(check_pinch_commutation(rho, l) < 1e-14);
  const auto r = commutation_identities(rho, l);
  CHECK(r.phi_unit == 0.0);
  CHECK(r.hamiltonian < 1e-15);
}

TEST_CASE("db fails for a non-commuting reset model") {
  Rng rng(20);
  for (int k = 0; k < 5; ++k) {
    const QrmSpec spec = random_qrm(3, rng);
    if (trace_norm(commutator(spec.hamiltonian, spec.reset_state.matrix())) <= 0.01) continue;
    const Lindbladian l = build_qrm(spec);
    CHECK_FALSE(check_db(qrm_steady_state(spec), l, 1.0).holds);
  }
}

TEST_CASE("random commuting constructions satisfy db") {
  Rng rng(21);
  for (int k = 0; k < 10; ++k) {
    const auto model = random_db_model(2 + k % 3, rng);
    CHECK(max_abs(apply_generator(model.generator, model.steady_state.matrix())) < 1e-12);
    CHECK(check_db(model.steady_state, model.generator, 1.0).holds);
    CHECK(check_pinch_commutation(model.steady_state, model.generator) < 1e-9);
  }
}

TEST_CASE("kms state") {
  const auto flat = kms_state(Operator::Zero(2, 2), 2.0);
  CHECK(max_diff(flat.state.matrix(), 0.5 * identity(2)) < 1e-15);
  CHECK(flat.free_energy == doctest::Approx(-std::log(2.0) / 2.0));
  const double e = std::exp(-1.0);
  CHECK(max_diff(kms_state(diag({0, 1}), 1.0).state.matrix(), diag({1 / (1 + e), e / (1 + e)})) < 1e-14);
  CHECK(max_diff(kms_state(diag({0, 1}), 1e3).state.matrix(), diag({1, 0})) < 1e-12);
}

TEST_CASE("fagnola counterexample") {
  const auto f = fagnola_fixture(0.6, 1.0);
  CHECK(f.s == doctest::Approx(4.0));
  CHECK(f.r == doctest::Approx(2.0));
  CHECK(max_diff(f.rho.matrix(), diag({0.1, 0.9})) < 1e-14);
  CHECK(max_abs(apply_generator(f.model, f.rho.matrix())) < 1e-10);
  // Delta^{1/2}(Gamma*) = rho^{1/2} Gamma* rho^{-1/2} = Gamma
  const Operator half = f.rho.power(0.5) * f.gamma.adjoint() * f.rho.power(-0.5);
  CHECK(max_diff(half, f.gamma) < 1e-10);

  CHECK(check_db(f.rho, f.model, 0.5).holds);
  CHECK_FALSE(check_db(f.rho, f.model, 1.0).holds);
  CHECK_FALSE(check_db(f.rho, f.model, 0.0).holds);

  // Defect of the pinching commutation. The operator that carries the
  // -4 omega kappa / (1 - kappa) sigma_3 defect is sigma_2; on sigma_1 the
  // defect vanishes identically (diagonal rho, see the decisions ledger).
  const double coefficient = -4.0 * 1.0 * 0.6 / (1.0 - 0.6);
  CHECK(coefficient == doctest::Approx(-6.0));
  CHECK(max_diff(pinch_commutation_defect(f.rho, f.model, pauli(2)), coefficient * pauli(3)) < 1e-9);
  CHECK(trace_norm(pinch_commutation_defect(f.rho, f.model, pauli(2))) == doctest::Approx(12.0));
  CHECK(max_abs(pinch_commutation_defect(f.rho, f.model, pauli(1))) < 1e-12);

  // i[H, rho] = -kappa sqrt(1 - kappa^2) sigma_2, trace norm 0.96
  const Complex i(0.0, 1.0);
  CHECK(max_diff(i * commutator(f.model.hamiltonian(), f.rho.matrix()), -0.48 * pauli(2)) < 1e-14);
  CHECK(commutation_identities(f.rho, f.model).hamiltonian == doctest::Approx(0.96));
  CHECK_THROWS_AS(fagnola_fixture(1.2, 1.0), Error);
}
