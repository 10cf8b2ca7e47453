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

#include <random>

#include "qtmp/lindblad.hpp"
#include "qtmp/operator.hpp"
#include "qtmp/qrm.hpp"

namespace qtmp {

using Rng = std::mt19937_64;

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
Operator random_unitary(Index dim, Rng& rng);
Operator random_hermitian(Index dim, Rng& rng, double scale = 1.0);
/// Full-rank state from a Ginibre matrix G: G G* / tr.
DensityMatrix random_density_matrix(Index dim, Rng& rng);
DensityMatrix random_pure_state(Index dim, Rng& rng);
Lindbladian random_lindbladian(Index dim, Rng& rng, int kraus_count = 2);

struct DbModel {
  Lindbladian generator;
  DensityMatrix steady_state;
};

/// Jumps between eigenvectors of a random faithful rho with rates
/// g_kl p_l = g_lk p_k, plus dephasing and a Hamiltonian diagonal in the
/// same basis. The spectrum of -log rho has distinct gaps.
DbModel random_db_model(Index dim, Rng& rng);

/// [H, T] = 0, H with simple Bohr spectrum, -log T with distinct gaps.
QrmSpec random_commuting_qrm(Index dim, Rng& rng);
/// Generic QRM: H and T drawn independently.
QrmSpec random_qrm(Index dim, Rng& rng);

}  // namespace qtmp
