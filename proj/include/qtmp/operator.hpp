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

// Dense complex operator algebra on a finite-dimensional Hilbert space.
// Operators are plain Eigen matrices; density matrices and spectral
// decompositions carry validated invariants.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qtmp {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using Index = Eigen::Index;

struct StateTolerances {
  double hermiticity = 1e-10;
  double trace = 1e-10;
  double psd = 1e-10;
  double faithful = 1e-12;
};

/// Eigenpairs of a Hermitian operator, eigenvalues ascending.
struct HermitianEigen {
  Eigen::VectorXd values;
  Operator vectors;
};

HermitianEigen eigen_hermitian(const Operator& a);

/// f applied to the spectrum: sum_k f(values_k) |v_k><v_k|.
template <class F>
Operator hermitian_function(const HermitianEigen& eig, F&& f) {
  Eigen::VectorXcd mapped(eig.values.size());
  for (Index k = 0; k < eig.values.size(); ++k) mapped(k) = Complex(f(eig.values(k)));
  return eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
}

Operator identity(Index dim);
/// sigma_0 = identity, sigma_1..3 the Pauli matrices.
Operator pauli(int k);
/// |a><b|
Operator matrix_unit(Index dim, Index a, Index b);
Operator commutator(const Operator& a, const Operator& b);
Operator anticommutator(const Operator& a, const Operator& b);
Operator hermitian_part(const Operator& a);

double max_abs(const Operator& a);
double hermiticity_defect(const Operator& a);
bool is_hermitian(const Operator& a, double tol = 1e-10);

void require_same_dim(const Operator& a, const Operator& b, const char* context);
void require_square(const Operator& a, const char* context);

/// Trace-one positive semidefinite operator. Construction validates the
/// invariants and caches the eigendecomposition.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Operator& m, const StateTolerances& tol = {});

  static DensityMatrix maximally_mixed(Index dim);
  /// Normalizes a PSD operator with positive trace.
  static DensityMatrix normalized(const Operator& m, const StateTolerances& tol = {});

  const Operator& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  bool faithful() const { return faithful_; }
  double faithfulness_threshold() const { return faithful_threshold_; }
  double min_eigenvalue() const { return eig_.values(0); }
  const Eigen::VectorXd& eigenvalues() const { return eig_.values; }
  const Operator& eigenvectors() const { return eig_.vectors; }
  const HermitianEigen& eigen() const { return eig_; }

  // Matrix functions below require a faithful state.
  Operator log() const;
  Operator power(double s) const;
  Operator inverse() const;

 private:
  Operator m_;
  HermitianEigen eig_;
  bool faithful_ = false;
  double faithful_threshold_ = 0.0;
};

/// Distinct eigenvalues (strictly increasing) with their orthogonal projectors.
struct SpectralDecomposition {
  std::vector<double> values;
  std::vector<Operator> projectors;
  std::vector<int> multiplicities;

  Index dim() const { return projectors.empty() ? 0 : projectors.front().rows(); }
  std::size_t size() const { return values.size(); }
  bool simple() const;
  Operator reconstruct() const;

  template <class F>
  Operator function(F&& f) const {
    Operator out = Operator::Zero(dim(), dim());
    for (std::size_t k = 0; k < values.size(); ++k) out += Complex(f(values[k])) * projectors[k];
    return out;
  }
};

/// Default eigenvalue clustering tolerance: 1e-10 * (spectral radius + 1).
double default_cluster_tol(const Operator& a);

/// cluster_tol < 0 selects default_cluster_tol(a).
SpectralDecomposition spectral_decompose(const Operator& a, double cluster_tol = -1.0);

/// tr(A* B)
Complex duality_bracket(const Operator& a, const Operator& b);

/// tr(rho^s A* rho^(1-s) B) for faithful rho and s in [0, 1].
Complex rho_s_inner(const DensityMatrix& rho, const Operator& a, const Operator& b, double s);

double trace_norm(const Operator& a);

/// Diag_S(T) = sum_s P_s T P_s
Operator pinch(const SpectralDecomposition& decomp, const Operator& t);

/// rho X rho^-1
Operator modular_apply(const DensityMatrix& rho, const Operator& x);

/// True iff the nonzero gaps s' - s are pairwise distinct beyond gap_tol.
bool check_gens(const SpectralDecomposition& decomp, double gap_tol);

}  // namespace qtmp
