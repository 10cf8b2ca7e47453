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

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "qtmp/lindblad.hpp"
#include "qtmp/operator.hpp"
#include "qtmp/two_time.hpp"

namespace qtmp {

/// Continuous-time Markov chain on the eigenvalues of S = -log rho.
struct Ctmc {
  std::vector<double> states;  // ascending, nats
  Eigen::RowVectorXd pi0;
  Eigen::MatrixXd q;           // rate matrix, rows sum to zero
  Eigen::VectorXd weights;     // diagonal of R, e^{-s}

  Index size() const { return static_cast<Index>(states.size()); }
};

/// Builds a chain directly from a rate matrix; weights follow the labels.
Ctmc make_chain(std::vector<double> states, Eigen::RowVectorXd pi0, Eigen::MatrixXd q);

/// rho must be a faithful stationary state satisfying detailed balance with
/// simple spectrum; rho0 faithful.
Ctmc extract_chain(const Lindbladian& l, const DensityMatrix& rho, const DensityMatrix& rho0);

Eigen::MatrixXd transition_matrix(const Ctmc& chain, double t);

struct ClassicalDbReport {
  double rq_residual = 0.0;        // max |RQ - Q^T R|
  double symmetry_residual = 0.0;  // max over sampled t of |R P(t) R^{-1} - P(t)^T|
};

ClassicalDbReport classical_db_check(const Ctmc& chain, const std::vector<double>& times = {0.1, 1.0, 10.0});

double classical_mgf(const Ctmc& chain, double t, double alpha);

/// Max |pi0_s P_ss'(t) - joint law| over the grid.
double chain_vs_quantum(const Ctmc& chain, const Lindbladian& l, const DensityMatrix& rho0,
                        const SpectralDecomposition& s, const std::vector<double>& t_grid);

/// Normalized nonnegative pi with pi Q = 0, from the kernel of Q^T.
Eigen::RowVectorXd invariant_distribution(const Ctmc& chain, double kernel_tol = kDefaultKernelTol);

/// Law of s' - s under pi0 and P(t).
DeltaDistribution chain_delta_distribution(const Ctmc& chain, double t, double gap_tol = -1.0);

/// Header of state labels, then one row of Q per state.
void write_chain_csv(std::ostream& out, const Ctmc& chain);

}  // namespace qtmp
