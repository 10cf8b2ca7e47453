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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qtmp/operator.hpp"

namespace qtmp {

/// L(rho) = -i[H, rho] + sum_l (G_l rho G_l* - 1/2 {G_l* G_l, rho}).
/// The Kraus list is taken as given; it is never canonicalized.
class Lindbladian {
 public:
  Lindbladian(Operator hamiltonian, std::vector<Operator> kraus, std::string label = {});

  static Lindbladian zero(Index dim);

  const Operator& hamiltonian() const { return hamiltonian_; }
  const std::vector<Operator>& kraus() const { return kraus_; }
  const std::string& label() const { return label_; }
  Index dim() const { return hamiltonian_.rows(); }

  /// Phi(1) = sum_l G_l* G_l
  const Operator& kraus_sum() const { return kraus_sum_; }

 private:
  Operator hamiltonian_;
  std::vector<Operator> kraus_;
  std::string label_;
  Operator kraus_sum_;
};

/// Matrix of a linear map on d x d operators, acting on column-major vec(X).
struct SuperOperatorMatrix {
  Index dim = 0;
  Eigen::MatrixXcd matrix;

  Operator apply(const Operator& x) const;
};

Eigen::VectorXcd vectorize(const Operator& x);
Operator unvectorize(const Eigen::VectorXcd& v, Index dim);
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Builds the matrix of an arbitrary linear map by probing matrix units.
SuperOperatorMatrix superoperator_from_map(Index dim, const std::function<Operator(const Operator&)>& map);

Operator apply_generator(const Lindbladian& l, const Operator& rho);
/// L^dagger(X) = i[H, X] - 1/2 {Phi(1), X} + Phi(X)
Operator apply_dual(const Lindbladian& l, const Operator& x);
/// Phi(X) = sum_l G_l* X G_l
Operator cp_map(const Lindbladian& l, const Operator& x);
/// Phi^dagger(rho) = sum_l G_l rho G_l*
Operator cp_map_dual(const Lindbladian& l, const Operator& rho);

enum class MapKind { Generator, Dual };

SuperOperatorMatrix to_superoperator(MapKind kind, const Lindbladian& l);
/// Matrix of the CP map Phi.
SuperOperatorMatrix cp_superoperator(const Lindbladian& l);

/// rho -> L(rho e^{-alpha S}) e^{alpha S}
SuperOperatorMatrix deformed_generator(const Lindbladian& l, const SpectralDecomposition& s, double alpha);

/// exp(t M) via scaling and squaring with a degree-13 Pade approximant.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& m, double t);

SuperOperatorMatrix propagator(const Lindbladian& l, double t);
Operator propagate_operator(const Lindbladian& l, const Operator& x, double t);
DensityMatrix propagate(const Lindbladian& l, const DensityMatrix& rho0, double t);

struct SteadyStateResult {
  std::vector<DensityMatrix> states;
  Index kernel_dimension = 0;
  std::vector<std::string> notes;
};

constexpr double kDefaultKernelTol = 1e-9;

/// kernel_tol is relative to the largest singular value of the generator matrix.
SteadyStateResult steady_states(const Lindbladian& l, double kernel_tol = kDefaultKernelTol);

/// The steady state when the kernel is one-dimensional; throws a hypothesis error otherwise.
DensityMatrix unique_steady_state(const Lindbladian& l, double kernel_tol = kDefaultKernelTol);

bool is_relaxing(const Lindbladian& l, double tol = kDefaultKernelTol);

/// Smallest -Re(lambda) over the nonzero part of the generator spectrum.
double spectral_gap(const Lindbladian& l, double tol = kDefaultKernelTol);

/// Spectral norm of the generator matrix.
double generator_norm(const Lindbladian& l);

struct ReservoirPart {
  Lindbladian generator;
  DensityMatrix steady_state;
  std::optional<double> beta;
};

/// L = sum_j L_j, each L_j with its own faithful invariant state.
struct ReservoirDecomposition {
  std::vector<ReservoirPart> parts;
  Lindbladian total;

  std::size_t size() const { return parts.size(); }
};

/// Assembles the total generator (Hamiltonians summed, Kraus lists joined)
/// and checks each part: faithful rho_j^+, L_j(rho_j^+) = 0.
ReservoirDecomposition make_reservoir_decomposition(std::vector<ReservoirPart> parts, double tol = 1e-9);

}  // namespace qtmp
