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

#include "qtmp/random_models.hpp"

#include <algorithm>
#include <cmath>

#include "qtmp/error.hpp"

namespace qtmp {

namespace {

Operator ginibre(Index dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Operator g(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  return g;
}

// Probabilities bounded away from zero so that -log p stays moderate.
Eigen::VectorXd random_probabilities(Index dim, Rng& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  Eigen::VectorXd p(dim);
  for (Index k = 0; k < dim; ++k) p(k) = u(rng);
  return p / p.sum();
}

bool distinct_gaps(const Eigen::VectorXd& values, double tol) {
  std::vector<double> v(values.data(), values.data() + values.size());
  std::sort(v.begin(), v.end());
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] - v[k - 1] <= tol) return false;
  std::vector<double> gaps;
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b) gaps.push_back(v[b] - v[a]);
  std::sort(gaps.begin(), gaps.end());
  for (std::size_t k = 1; k < gaps.size(); ++k)
    if (gaps[k] - gaps[k - 1] <= tol) return false;
  return true;
}

Eigen::VectorXd generic_probabilities(Index dim, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Eigen::VectorXd p = random_probabilities(dim, rng);
    if (distinct_gaps(-p.array().log().matrix(), 1e-3)) return p;
  }
  fail(ErrorKind::Numeric, "random model: could not draw generic probabilities");
}

Eigen::VectorXd bohr_energies(Index dim, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Eigen::VectorXd e(dim);
    for (Index k = 0; k < dim; ++k) e(k) = u(rng);
    if (distinct_gaps(e, 1e-3)) return e;
  }
  fail(ErrorKind::Numeric, "random model: could not draw Bohr-generic energies");
}

Operator in_basis(const Operator& u, const Eigen::VectorXd& diag) {
  return u * diag.cast<Complex>().asDiagonal() * u.adjoint();
}

}  // namespace

Operator random_unitary(Index dim, Rng& rng) {
  Eigen::HouseholderQR<Operator> qr(ginibre(dim, rng));
  Operator q = qr.householderQ() * Operator::Identity(dim, dim);
  const Operator r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

Operator random_hermitian(Index dim, Rng& rng, double scale) {
  const Operator g = ginibre(dim, rng);
  return scale * 0.5 * (g + g.adjoint()) / std::sqrt(static_cast<double>(dim));
}

DensityMatrix random_density_matrix(Index dim, Rng& rng) {
  const Operator g = ginibre(dim, rng);
  const Operator m = g * g.adjoint();
  return DensityMatrix(hermitian_part(m / m.trace().real()));
}

DensityMatrix random_pure_state(Index dim, Rng& rng) {
  Eigen::VectorXcd v = ginibre(dim, rng).col(0);
  v.normalize();
  return DensityMatrix(hermitian_part(v * v.adjoint()));
}

Lindbladian random_lindbladian(Index dim, Rng& rng, int kraus_count) {
  std::vector<Operator> kraus;
  for (int k = 0; k < kraus_count; ++k) kraus.push_back(ginibre(dim, rng) / std::sqrt(static_cast<double>(dim)));
  return Lindbladian(random_hermitian(dim, rng), std::move(kraus), "random");
}

DbModel random_db_model(Index dim, Rng& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  const Operator basis = random_unitary(dim, rng);
  const Eigen::VectorXd p = generic_probabilities(dim, rng);
  std::vector<Operator> kraus;
  for (Index k = 0; k < dim; ++k)
    for (Index l = k + 1; l < dim; ++l) {
      const double a = u(rng);
      // rates g_kl = a sqrt(p_k / p_l) make g_kl p_l symmetric
      const Eigen::VectorXcd ek = basis.col(k);
      const Eigen::VectorXcd el = basis.col(l);
      kraus.push_back(std::sqrt(a * std::sqrt(p(k) / p(l))) * ek * el.adjoint());
      kraus.push_back(std::sqrt(a * std::sqrt(p(l) / p(k))) * el * ek.adjoint());
    }
  Eigen::VectorXd dephasing(dim);
  for (Index k = 0; k < dim; ++k) dephasing(k) = u(rng);
  kraus.push_back(in_basis(basis, dephasing));
  const Operator h = in_basis(basis, bohr_energies(dim, rng));
  const Operator rho = in_basis(basis, p);
  return DbModel{Lindbladian(h, std::move(kraus), "random-db"), DensityMatrix(hermitian_part(rho))};
}

QrmSpec random_commuting_qrm(Index dim, Rng& rng) {
  std::uniform_real_distribution<double> u(0.5, 2.0);
  const Operator basis = random_unitary(dim, rng);
  const Operator h = hermitian_part(in_basis(basis, bohr_energies(dim, rng)));
  const Operator t = hermitian_part(in_basis(basis, generic_probabilities(dim, rng)));
  return QrmSpec{h, DensityMatrix(t), u(rng), 1.0};
}

QrmSpec random_qrm(Index dim, Rng& rng) {
  std::uniform_real_distribution<double> u(0.5, 2.0);
  return QrmSpec{random_hermitian(dim, rng), random_density_matrix(dim, rng), u(rng), 1.0};
}

}  // namespace qtmp
