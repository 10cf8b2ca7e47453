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
#include "qtmp/two_time.hpp"

using namespace qtmp;
using qtmp::test::diag;
using qtmp::test::max_diff;

TEST_CASE("first measurement law") {
  const auto s = spectral_decompose(diag({0.2, 1.5}));
  const auto law = first_law(DensityMatrix(diag({0.3, 0.7})), s);
  CHECK(law[0] == doctest::Approx(0.3));
  CHECK(law[1] == doctest::Approx(0.7));
  const auto degenerate = spectral_decompose(diag({1, 1, 2}));
  const auto flat = first_law(DensityMatrix::maximally_mixed(3), degenerate);
  CHECK(flat[0] == doctest::Approx(2.0 / 3.0));
  const auto sharp = first_law(DensityMatrix(diag({0, 0, 1})), degenerate);
  CHECK(sharp[1] == doctest::Approx(1.0));
}

TEST_CASE("joint law") {
  Rng rng(40);
  const Lindbladian l = random_lindbladian(3, rng, 2);
  const auto rho0 = random_density_matrix(3, rng);
  const auto s = spectral_decompose(random_hermitian(3, rng));

  const auto at_zero = joint_law(l, rho0, s, 0.0);
  const auto first = first_law(rho0, s);
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < s.size(); ++b) CHECK(at_zero.matrix(a, b) == doctest::Approx(a == b ? first[a] : 0.0));

  const double t = 0.8;
  const auto joint = joint_law(l, rho0, s, t);
  CHECK(joint.matrix.sum() == doctest::Approx(1.0).epsilon(1e-12));
  const Operator pinched = propagate_operator(l, pinch(s, rho0.matrix()), t);
  const auto second = joint.second_marginal();
  for (std::size_t b = 0; b < s.size(); ++b)
    CHECK(std::abs(second[b] - duality_bracket(pinched, s.projectors[b]).real()) < 1e-10);

  // large time: factorized limit
  const auto plus = unique_steady_state(l);
  const auto limit = joint_law(l, rho0, s, 60.0 / spectral_gap(l));
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < s.size(); ++b)
      CHECK(std::abs(limit.matrix(a, b) - first[a] * duality_bracket(plus.matrix(), s.projectors[b]).real()) < 1e-9);
}

TEST_CASE("conditional law of a zero-probability outcome is undefined") {
  const auto spec = test::qubit_qrm();
  const auto s = spectral_decompose(diag({0, 1}));
  const auto joint = joint_law(build_qrm(spec), DensityMatrix(diag({1, 0})), s, 1.0);
  CHECK(joint.conditional(0).has_value());
  CHECK_FALSE(joint.conditional(1).has_value());
}

TEST_CASE("decoherence of the first measurement") {
  Rng rng(41);
  const Lindbladian l = random_lindbladian(2, rng, 2);
  const auto s = spectral_decompose(pauli(3));
  const double t = 0.5;
  auto unpinched_marginal = [&](const DensityMatrix& rho0) {
    const Operator evolved = propagate_operator(l, rho0.matrix(), t);
    return duality_bracket(evolved, s.projectors[0]).real();
  };
  const DensityMatrix commuting(diag({0.3, 0.7}));
  CHECK(std::abs(joint_law(l, commuting, s, t).second_marginal()[0] - unpinched_marginal(commuting)) < 1e-12);
  const DensityMatrix coherent(0.5 * (identity(2) + 0.8 * pauli(1)));
  CHECK(std::abs(joint_law(l, coherent, s, t).second_marginal()[0] - unpinched_marginal(coherent)) > 1e-6);
}

TEST_CASE("delta distribution") {
  Rng rng(42);
  const auto model = random_db_model(3, rng);
  const auto s = spectral_decompose(-model.steady_state.log());
  const auto rho0 = random_density_matrix(3, rng);

  const auto at_zero = delta_distribution(model.generator, rho0, s, 0.0);
  CHECK(at_zero.probability_of(0.0, 1e-12) == doctest::Approx(1.0));

  const auto law = delta_distribution(model.generator, rho0, s, 0.7);
  CHECK(law.total() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(law.support.size() == 7);  // distinct gaps: 3 * 2 nonzero values plus 0

  // symmetry when the initial state is the pinched steady state
  const auto sym = delta_distribution(model.generator, model.steady_state, s, 0.7);
  for (std::size_t k = 0; k < sym.support.size(); ++k)
    CHECK(std::abs(sym.probabilities[k] - sym.probability_of(-sym.support[k], 1e-9)) < 1e-10);

  // classical ratio law Q(sigma)/Q(-sigma) = e^{-sigma} <rho0|P_s>/<rho0|P_s'>
  const auto first = first_law(rho0, s);
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (a == b) continue;
      const double sigma = s.values[b] - s.values[a];
      const double ratio = law.probability_of(sigma, 1e-9) / law.probability_of(-sigma, 1e-9);
      const double expected = std::exp(-sigma) * first[a] / first[b];
      CHECK(std::abs(ratio / expected - 1.0) < 1e-8);
    }
}

TEST_CASE("mgf") {
  Rng rng(43);
  const auto model = random_db_model(3, rng);
  const auto s = spectral_decompose(-model.steady_state.log());
  const auto rho0 = random_density_matrix(3, rng);
  for (double t : {0.0, 0.3, 2.0})
    for (double alpha : {-1.0, -0.3, 0.0, 0.5, 1.2}) {
      const double direct = mgf(model.generator, rho0, s, t, alpha, MgfMethod::Direct);
      const double deformed = mgf(model.generator, rho0, s, t, alpha, MgfMethod::Deformed);
      CHECK(std::abs(direct - deformed) < 1e-9 * std::max(1.0, direct));
      if (alpha == 0.0 || t == 0.0) CHECK(direct == doctest::Approx(1.0).epsilon(1e-12));
    }
  // long-time limit <rho+|e^{alpha S}><rho0|e^{-alpha S}>
  const double alpha = 0.4;
  const double t_big = 60.0 / spectral_gap(model.generator);
  const double limit = duality_bracket(model.steady_state.matrix(), s.function([&](double v) { return std::exp(alpha * v); })).real() *
                       duality_bracket(rho0.matrix(), s.function([&](double v) { return std::exp(-alpha * v); })).real();
  CHECK(mgf(model.generator, rho0, s, t_big, alpha, MgfMethod::Direct) == doctest::Approx(limit).epsilon(1e-9));
}

TEST_CASE("expected variation") {
  Rng rng(44);
  const auto model = random_db_model(3, rng);
  const auto s = spectral_decompose(-model.steady_state.log());
  const auto rho0 = random_density_matrix(3, rng);
  CHECK(expected_delta(model.generator, rho0, s, 0.0) == doctest::Approx(0.0));
  const double t = 0.9;
  const double e = expected_delta(model.generator, rho0, s, t);
  const double h = 1e-5;
  const double slope = (mgf(model.generator, rho0, s, t, h, MgfMethod::Direct) -
                        mgf(model.generator, rho0, s, t, -h, MgfMethod::Direct)) / (2.0 * h);
  CHECK(std::abs(slope - e) < 1e-6);
  // no decoherence effect under detailed balance
  const Operator splus = s.reconstruct();
  const double unpinched = duality_bracket(propagate_operator(model.generator, rho0.matrix(), t) - rho0.matrix(), splus).real();
  CHECK(std::abs(e - unpinched) < 1e-9);
  const double t_big = 60.0 / spectral_gap(model.generator);
  CHECK(std::abs(expected_delta(model.generator, rho0, s, t_big) -
                 duality_bracket(model.steady_state.matrix() - rho0.matrix(), splus).real()) < 1e-9);
}

TEST_CASE("expectation decomposition") {
  Rng rng(45);
  const auto model = random_db_model(3, rng);
  const auto rho0 = random_density_matrix(3, rng);
  const auto e = expflu_decomposition(model.generator, model.steady_state, rho0, 1.5);
  CHECK(std::abs(e.expected - e.qm_difference) < 1e-9);
  CHECK(e.consistent);
  CHECK(e.entropy_change >= e.expected - 1e-9);

  const auto still = expflu_decomposition(model.generator, model.steady_state, model.steady_state, 1.0);
  CHECK(std::abs(still.expected) < 1e-12);
  CHECK(std::abs(still.flux_integral) < 1e-10);
  CHECK(std::abs(still.entropy_change) < 1e-10);
  CHECK(std::abs(still.ep_integral) < 1e-10);

  const double t_big = 40.0 / spectral_gap(model.generator);
  const auto late = expflu_decomposition(model.generator, model.steady_state, rho0, t_big);
  const double limit = von_neumann_entropy(model.steady_state) - von_neumann_entropy(rho0) -
                       relative_entropy(rho0, model.steady_state).value();
  CHECK(std::abs(late.expected - limit) < 1e-9);

  const auto f = fagnola_fixture(0.6, 1.0);
  CHECK_THROWS_AS(expflu_decomposition(f.model, f.rho, f.rho, 1.0), Error);
}

TEST_CASE("two-reservoir estimator") {
  const Operator h = diag({0, 1, 3});
  std::vector<QrmSpec> parts{{h, DensityMatrix(diag({0.5, 0.3, 0.2})), 1.0, 0.5},
                             {h, DensityMatrix(diag({0.1, 0.3, 0.6})), 0.5, 0.5}};
  const auto multi = build_multi_reservoir(parts);
  const auto& decomp = multi.decomposition;
  const double closed = qrm_multi_ep_closed(parts).value();
  const DensityMatrix& plus = multi.combined.reset_state;

  const double direct = entropy_production(decomp, plus).value();
  CHECK(direct == doctest::Approx(closed).epsilon(1e-12));
  const double t = 1e-2;
  CHECK(std::abs(ep_estimator(decomp, plus, t) - closed) < 5.0 * t * std::max(1.0, closed) * 1.5);
  CHECK(std::abs(ep_estimator_richardson(decomp, plus, t, 2) - direct) < 1e-5);

  // equilibrium: identical reservoirs produce no entropy
  std::vector<QrmSpec> same{{h, parts[0].reset_state, 1.0, 0.5}, {h, parts[0].reset_state, 2.0, 0.5}};
  const auto eq = build_multi_reservoir(same);
  CHECK(std::abs(ep_estimator(eq.decomposition, parts[0].reset_state, default_estimator_time(eq.decomposition))) < 1e-8);

  CHECK_THROWS_AS(ep_estimator(decomp, DensityMatrix::maximally_mixed(3), t), Error);

  const auto laws = multi_reservoir_2tmp(decomp, DensityMatrix::maximally_mixed(3), 0.4);
  CHECK(laws.size() == 2);
  const auto single = delta_distribution(decomp.parts[0].generator, DensityMatrix::maximally_mixed(3),
                                         spectral_decompose(-decomp.parts[0].steady_state.log()), 0.4);
  CHECK(laws[0].support == single.support);
}
