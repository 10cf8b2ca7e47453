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
#include <sstream>

#include "helpers.hpp"
#include "qtmp/classical_chain.hpp"
#include "qtmp/detailed_balance.hpp"
#include "qtmp/error.hpp"
#include "qtmp/format.hpp"

using namespace qtmp;
using qtmp::test::diag;

namespace {

double max_diff_real(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("qubit reset chain") {
  const auto spec = test::qubit_qrm();
  const Lindbladian l = build_qrm(spec);
  const DensityMatrix rho0(diag({0.4, 0.6}));
  const auto chain = extract_chain(l, spec.reset_state, rho0);
  Eigen::MatrixXd q(2, 2);
  q << -0.25, 0.25, 0.75, -0.75;
  CHECK(max_diff_real(chain.q, q) < 1e-12);
  CHECK(chain.states[0] == doctest::Approx(-std::log(0.75)));
  CHECK(chain.pi0(0) == doctest::Approx(0.4));

  const auto pi = invariant_distribution(chain);
  CHECK(std::abs(pi(0) - 0.75) < 1e-10);
  CHECK(std::abs(pi(1) - 0.25) < 1e-10);

  const double t = 0.6;
  const double decay = std::exp(-t);
  Eigen::MatrixXd p(2, 2);
  p << 0.75 * (1 - decay) + decay, 0.25 * (1 - decay), 0.75 * (1 - decay), 0.25 * (1 - decay) + decay;
  CHECK(max_diff_real(transition_matrix(chain, t), p) < 1e-12);
  CHECK(max_diff_real(transition_matrix(chain, 0.0), Eigen::MatrixXd::Identity(2, 2)) < 1e-15);
  CHECK_THROWS_AS(transition_matrix(chain, -1.0), Error);
}

TEST_CASE("free dynamics gives a frozen chain") {
  const Lindbladian l(diag({0, 1}), {});
  const DensityMatrix rho(diag({0.3, 0.7}));
  const auto chain = extract_chain(l, rho, rho);
  CHECK(chain.q.cwiseAbs().maxCoeff() == 0.0);
  CHECK(max_diff_real(transition_matrix(chain, 5.0), Eigen::MatrixXd::Identity(2, 2)) < 1e-15);
  CHECK(classical_db_check(chain).rq_residual == 0.0);
}

TEST_CASE("chain reproduces the quantum statistics") {
  Rng rng(50);
  for (int k = 0; k < 5; ++k) {
    const auto model = random_db_model(2 + k % 3, rng);
    const auto rho0 = random_density_matrix(model.steady_state.dim(), rng);
    const auto s = spectral_decompose(-model.steady_state.log());
    const auto chain = extract_chain(model.generator, model.steady_state, rho0);
    CHECK(chain_vs_quantum(chain, model.generator, rho0, s, {0.0, 0.1, 1.0, 10.0}) < 1e-9);
    CHECK(chain.q.rowwise().sum().cwiseAbs().maxCoeff() < 1e-10);
    const auto db = classical_db_check(chain);
    CHECK(db.rq_residual < 1e-9);
    CHECK(db.symmetry_residual < 1e-9);
    CHECK((invariant_distribution(chain).transpose() - chain.weights).cwiseAbs().maxCoeff() < 1e-10);

    // conditional law equals <e^{tL}(P_s)|P_s'>
    const double t = 0.7;
    const Eigen::MatrixXd p = transition_matrix(chain, t);
    for (std::size_t a = 0; a < s.size(); ++a) {
      const Operator evolved = propagate_operator(model.generator, s.projectors[a], t);
      for (std::size_t b = 0; b < s.size(); ++b)
        CHECK(std::abs(p(a, b) - duality_bracket(evolved, s.projectors[b]).real()) < 1e-9);
    }
    // long time: rows approach e^{-s'}
    const Eigen::MatrixXd late = transition_matrix(chain, 60.0 / spectral_gap(model.generator));
    for (Index a = 0; a < chain.size(); ++a) CHECK((late.row(a).transpose() - chain.weights).cwiseAbs().maxCoeff() < 1e-9);

    // rho0 independence of the rates
    const auto other = extract_chain(model.generator, model.steady_state, random_density_matrix(rho0.dim(), rng));
    CHECK(max_diff_real(other.q, chain.q) < 1e-14);
  }
}

TEST_CASE("classical mgf") {
  Rng rng(51);
  const auto model = random_db_model(3, rng);
  const auto rho0 = random_density_matrix(3, rng);
  const auto s = spectral_decompose(-model.steady_state.log());
  const auto chain = extract_chain(model.generator, model.steady_state, rho0);
  for (double t : {0.0, 0.5, 3.0}) {
    CHECK(classical_mgf(chain, t, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (double alpha : {-0.8, 0.3, 1.0})
      CHECK(std::abs(classical_mgf(chain, t, alpha) - mgf(model.generator, rho0, s, t, alpha, MgfMethod::Direct)) < 1e-9);
  }
  // mixed derivative at the origin is the flux -d0 Q log R 1 = d0 Q s
  const double h = 1e-4, k = 1e-4;
  auto dt = [&](double alpha) {
    return (-3.0 * classical_mgf(chain, 0.0, alpha) + 4.0 * classical_mgf(chain, h, alpha) -
            classical_mgf(chain, 2.0 * h, alpha)) / (2.0 * h);
  };
  const double mixed = (dt(k) - dt(-k)) / (2.0 * k);
  Eigen::VectorXd labels(chain.size());
  for (Index a = 0; a < chain.size(); ++a) labels(a) = chain.states[a];
  const double flux = chain.pi0 * chain.q * labels;
  CHECK(std::abs(mixed - flux) < 1e-5);
}

TEST_CASE("classical symmetry") {
  Rng rng(52);
  const auto model = random_db_model(3, rng);
  const auto chain = extract_chain(model.generator, model.steady_state, model.steady_state);
  const auto law = chain_delta_distribution(chain, 0.8);
  for (std::size_t k = 0; k < law.support.size(); ++k)
    CHECK(std::abs(law.probabilities[k] - law.probability_of(-law.support[k], 1e-9)) < 1e-10);
  CHECK(std::abs(law.mean()) < 1e-10);
}

TEST_CASE("energy measurement shares the transition matrix") {
  Rng rng(53);
  const auto model = random_db_model(3, rng);
  const auto rho0 = random_density_matrix(3, rng);
  const auto chain = extract_chain(model.generator, model.steady_state, rho0);
  const auto s = spectral_decompose(-model.steady_state.log());
  const auto energy = spectral_decompose(model.generator.hamiltonian());
  REQUIRE(energy.simple());
  // relabel energy outcomes by their projector
  std::vector<std::size_t> to_energy(s.size());
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t e = 0; e < energy.size(); ++e)
      if ((s.projectors[a] - energy.projectors[e]).cwiseAbs().maxCoeff() < 1e-8) to_energy[a] = e;
  const double t = 1.1;
  const auto joint = joint_law(model.generator, rho0, energy, t);
  const Eigen::MatrixXd p = transition_matrix(chain, t);
  for (std::size_t a = 0; a < s.size(); ++a) {
    const auto row = joint.conditional(to_energy[a]);
    REQUIRE(row.has_value());
    for (std::size_t b = 0; b < s.size(); ++b) CHECK(std::abs((*row)[to_energy[b]] - p(a, b)) < 1e-9);
  }
}

TEST_CASE("non-reversible chain") {
  Eigen::MatrixXd q(3, 3);
  q << -1, 1, 0, 0, -1, 1, 1, 0, -1;
  const double l3 = std::log(3.0);
  const auto chain = make_chain({l3, l3, l3}, Eigen::RowVectorXd::Constant(3, 1.0 / 3.0), q);
  CHECK(classical_db_check(chain).rq_residual > 0.1);
  CHECK(classical_db_check(Ctmc{}).rq_residual == 0.0);
  const auto pi = invariant_distribution(chain);
  CHECK((pi * q).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(pi.sum() == doctest::Approx(1.0));
}

TEST_CASE("refusals") {
  const QrmSpec degenerate{diag({0, 1, 3}), DensityMatrix(diag({0.5, 0.25, 0.25})), 1.0, 1.0};
  CHECK_THROWS_AS(extract_chain(build_qrm(degenerate), degenerate.reset_state, degenerate.reset_state), Error);
  const auto f = fagnola_fixture(0.6, 1.0);
  try {
    extract_chain(f.model, f.rho, f.rho);
    FAIL("expected a hypothesis error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Hypothesis);
  }
}

TEST_CASE("chain csv export") {
  const auto spec = test::qubit_qrm();
  const auto chain = extract_chain(build_qrm(spec), spec.reset_state, spec.reset_state);
  std::ostringstream out;
  write_chain_csv(out, chain);
  std::istringstream lines(out.str());
  std::string header, row0, row1;
  std::getline(lines, header);
  std::getline(lines, row0);
  std::getline(lines, row1);
  CHECK(header == format_number(chain.states[0]) + "," + format_number(chain.states[1]));
  double a = 0, b = 0;
  char comma = 0;
  std::istringstream(row0) >> a >> comma >> b;
  CHECK(a == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(b == doctest::Approx(0.25).epsilon(1e-14));
  std::istringstream(row1) >> a >> comma >> b;
  CHECK(a == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(b == doctest::Approx(-0.75).epsilon(1e-14));
}
