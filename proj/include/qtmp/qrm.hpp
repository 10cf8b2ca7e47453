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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qtmp/entropy.hpp"
#include "qtmp/lindblad.hpp"
#include "qtmp/operator.hpp"
#include "qtmp/two_time.hpp"

namespace qtmp {

/// Quantum reset model: L(rho) = -i[lambda H, rho] + gamma (T tr rho - rho).
struct QrmSpec {
  Operator hamiltonian;
  DensityMatrix reset_state;
  double gamma = 1.0;
  double lambda = 1.0;
};

Lindbladian build_qrm(const QrmSpec& spec);

/// Nonzero Bohr frequencies e_i - e_j pairwise distinct beyond tol.
bool check_bohr(const Operator& hamiltonian, double tol = 1e-9);

struct SpectrumPoint {
  Complex value;
  int multiplicity = 1;
};

/// Sorted by imaginary part, then real part.
std::vector<SpectrumPoint> qrm_spectrum(const QrmSpec& spec);

DensityMatrix qrm_steady_state(const QrmSpec& spec);

DensityMatrix qrm_propagate_closed(const QrmSpec& spec, const DensityMatrix& rho0, double t);

/// Closed-form chain for [H, T] = 0 with simple spectrum of -log T.
struct QrmChain {
  std::vector<double> states;
  Eigen::RowVectorXd invariant;  // e^{-s}
  Eigen::MatrixXd q;
  double gamma = 0.0;

  Eigen::MatrixXd transition(double t) const;
};

QrmChain qrm_chain_closed(const QrmSpec& spec);

DeltaDistribution qrm_delta_closed(const QrmSpec& spec, const DensityMatrix& rho0, double t, double gap_tol = -1.0);

double qrm_mgf_closed(const QrmSpec& spec, const DensityMatrix& rho0, double t, double alpha);

double qrm_expected_closed(const QrmSpec& spec, const DensityMatrix& rho0, double t);

struct MultiReservoir {
  ReservoirDecomposition decomposition;
  QrmSpec combined;  // gamma = sum gamma_j, T = sum gamma_j T_j / gamma
  std::vector<std::string> warnings;
};

/// All parts share the Hamiltonian; weights lambda_j must sum to 1.
MultiReservoir build_multi_reservoir(const std::vector<QrmSpec>& parts);

/// sum_j gamma_j (Ent(T|T_j) + Ent(T_j|T)) at the combined reset state.
ExtendedReal qrm_multi_ep_closed(const std::vector<QrmSpec>& parts);

}  // namespace qtmp
