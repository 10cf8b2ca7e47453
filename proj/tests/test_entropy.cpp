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
#include "qtmp/entropy.hpp"
#include "qtmp/error.hpp"

using namespace qtmp;
using qtmp::test::diag;
using qtmp::test::max_diff;

namespace {

double reference_entropy(std::initializer_list<double> p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0) s -= x * std::log(x);
  return s;
}

}  // namespace

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(DensityMatrix(diag({1, 0}))) == doctest::Approx(0.0));
  CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed(2)) == doctest::Approx(std::log(2.0)));
  CHECK(von_neumann_entropy(DensityMatrix(diag({0.75, 0.25}))) == doctest::Approx(0.5623).epsilon(1e-4));
  CHECK(von_neumann_entropy(DensityMatrix(diag({0.75, 0.25}))) == doctest::Approx(reference_entropy({0.75, 0.25})));
}

TEST_CASE("relative entropy") {
  const auto half = DensityMatrix::maximally_mixed(2);
  const DensityMatrix ground(diag({1, 0}));
  CHECK(relative_entropy(half, half).value() == doctest::Approx(0.0));
  CHECK(relative_entropy(ground, half).value() == doctest::Approx(std::log(2.0)));
  CHECK(relative_entropy(half, ground).is_infinite());
  CHECK_THROWS_AS(relative_entropy(half, ground).value(), Error);

  Rng rng(30);
  for (int k = 0; k < 20; ++k) {
    const auto mu = random_density_matrix(3, rng);
    const auto nu = random_density_matrix(3, rng);
    CHECK(relative_entropy(mu, nu).value() > 0.0);
    CHECK(relative_entropy(mu, mu).value() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("extended real arithmetic") {
  const auto inf = ExtendedReal::infinity();
  const auto one = ExtendedReal::finite(1.0);
  CHECK((one + one).value() == 2.0);
  CHECK((one + inf).is_infinite());
  CHECK(std::isinf(inf.as_double()));
}

TEST_CASE("entropy production of a reset model") {
  const auto spec = test::qubit_qrm();
  const Lindbladian l = build_qrm(spec);
  CHECK(ep_component(spec.reset_state, l, spec.reset_state).value() == doctest::Approx(0.0).epsilon(1e-14));

  Rng rng(31);
  const auto rho = random_density_matrix(2, rng);
  const double closed = spec.gamma * (relative_entropy(spec.reset_state, rho).value() +
                                      relative_entropy(rho, spec.reset_state).value());
  CHECK(ep_component(rho, l, spec.reset_state).value() == doctest::Approx(closed).epsilon(1e-12));

  // -d/dt Ent(e^{tL} rho | rho+) at t = 0
  const double h = 1e-5;
  auto ent = [&](double t) { return relative_entropy(propagate(l, rho, t), spec.reset_state).value(); };
  // one-sided second-order difference: t = -h is outside the semigroup
  const double derivative = (-3.0 * ent(0.0) + 4.0 * ent(h) - ent(2.0 * h)) / (2.0 * h);
  CHECK(std::abs(-derivative - ep_component(rho, l, spec.reset_state).value()) < 1e-4);

  const DensityMatrix pure(diag({0, 1}));
  CHECK(ep_component(pure, l, spec.reset_state).is_infinite());
}

TEST_CASE("entropy flux") {
  Rng rng(32);
  const Lindbladian l = random_lindbladian(3, rng, 2);
  const auto flat = entropy_flux(l, DensityMatrix::maximally_mixed(3));
  CHECK(max_diff(flat.s_plus, std::log(3.0) * identity(3)) < 1e-13);
  CHECK(max_abs(flat.i_plus) < 1e-12);

  const Lindbladian relaxing = random_lindbladian(2, rng, 2);
  const auto plus = unique_steady_state(relaxing);
  const auto flux = entropy_flux(relaxing, plus);
  CHECK(std::abs(duality_bracket(plus.matrix(), flux.i_plus)) < 1e-10);

  // Reset to a Gibbs state: S+ = beta (H - F), so I+ = beta L^dagger(H).
  const Operator h = diag({0.0, 0.4, 1.1});
  const double beta = 1.3;
  const auto gibbs = kms_state(h, beta);
  const Lindbladian reset = build_qrm(QrmSpec{h, gibbs.state, 0.8, 1.0});
  const auto heat = entropy_flux(reset, gibbs.state, HeatSpec{beta, h});
  CHECK(heat.kms_state_matches);
  CHECK(heat.kms_flux_residual < 1e-10);
}

TEST_CASE("entropy balance") {
  const auto spec = test::qubit_qrm();
  const Lindbladian l = build_qrm(spec);
  const auto decomp = make_reservoir_decomposition({{l, spec.reset_state, std::nullopt}});
  CHECK(entropy_balance(decomp, spec.reset_state, 0.0).residual.value() < 1e-8);

  Rng rng(33);
  const auto rho = random_density_matrix(2, rng);
  CHECK(entropy_balance(decomp, rho, 0.5, 1e-5).residual.value() < 1e-4);
}

TEST_CASE("finiteness scan") {
  const auto spec = test::qubit_qrm();
  const Lindbladian l = build_qrm(spec);
  const std::vector<double> grid{0.0, 0.05, 0.1, 0.5, 1.0, 2.0};
  Rng rng(34);
  const auto faithful = finiteness_scan(l, random_density_matrix(2, rng), grid);
  CHECK(faithful.all_finite);
  CHECK(faithful.consistent);

  const auto pure = finiteness_scan(l, DensityMatrix(diag({0, 1})), grid);
  CHECK_FALSE(pure.points.front().rate.is_finite());
  REQUIRE(pure.finite_from.has_value());
  CHECK(*pure.finite_from <= 0.05);

  const auto steady = finiteness_scan(l, spec.reset_state, grid);
  for (const auto& p : steady.points) CHECK(std::abs(p.rate.value()) < 1e-12);

  CHECK_THROWS_AS(finiteness_scan(Lindbladian(diag({0, 1}), {}), spec.reset_state, grid), Error);
}
