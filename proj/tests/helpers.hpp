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

#include <doctest.h>

#include "qtmp/lindblad.hpp"
#include "qtmp/operator.hpp"
#include "qtmp/qrm.hpp"
#include "qtmp/random_models.hpp"

namespace qtmp::test {

inline Operator diag(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Index>(values.size()));
  Index k = 0;
  for (double x : values) v(k++) = x;
  return v.cast<Complex>().asDiagonal();
}

inline double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline Operator random_operator(Index dim, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Operator m(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

/// Qubit reset model used across suites: H = diag(0,1), T = diag(0.75,0.25), gamma = 1.
inline QrmSpec qubit_qrm() { return QrmSpec{diag({0.0, 1.0}), DensityMatrix(diag({0.75, 0.25})), 1.0, 1.0}; }

}  // namespace qtmp::test
