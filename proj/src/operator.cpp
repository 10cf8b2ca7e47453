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

#include "qtmp/operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qtmp/error.hpp"

namespace qtmp {

HermitianEigen eigen_hermitian(const Operator& a) {
  require_square(a, "eigen_hermitian");
  Eigen::SelfAdjointEigenSolver<Operator> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) fail(ErrorKind::Numeric, "Hermitian eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Operator identity(Index dim) { return Operator::Identity(dim, dim); }

Operator pauli(int k) {
  const Complex i(0.0, 1.0);
  Operator p(2, 2);
  switch (k) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, -i, i, 0; break;
    case 3: p << 1, 0, 0, -1; break;
    default: fail(ErrorKind::InvalidArgument, "pauli index must be in 0..3");
  }
  return p;
}

Operator matrix_unit(Index dim, Index a, Index b) {
  Operator e = Operator::Zero(dim, dim);
  e(a, b) = 1.0;
  return e;
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }
Operator anticommutator(const Operator& a, const Operator& b) { return a * b + b * a; }
Operator hermitian_part(const Operator& a) { return 0.5 * (a + a.adjoint()); }

double max_abs(const Operator& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const Operator& a) { return max_abs(a - a.adjoint()); }

bool is_hermitian(const Operator& a, double tol) {
  return a.rows() == a.cols() && hermiticity_defect(a) <= tol;
}

void require_square(const Operator& a, const char* context) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    std::ostringstream msg;
    msg << context << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
    fail(ErrorKind::InvalidArgument, msg.str());
  }
}

void require_same_dim(const Operator& a, const Operator& b, const char* context) {
  require_square(a, context);
  require_square(b, context);
  if (a.rows() != b.rows()) {
    std::ostringstream msg;
    msg << context << ": dimension mismatch (" << a.rows() << " vs " << b.rows() << ")";
    fail(ErrorKind::InvalidArgument, msg.str());
  }
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(const Operator& m, const StateTolerances& tol) {
  require_square(m, "DensityMatrix");
  if (hermiticity_defect(m) > tol.hermiticity) {
    fail(ErrorKind::InvalidArgument, "DensityMatrix: operator is not Hermitian");
  }
  m_ = hermitian_part(m);
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > tol.trace) {
    std::ostringstream msg;
    msg << "DensityMatrix: trace " << tr << " differs from 1";
    fail(ErrorKind::InvalidArgument, msg.str());
  }
  eig_ = eigen_hermitian(m_);
  if (eig_.values(0) < -tol.psd) {
    std::ostringstream msg;
    msg << "DensityMatrix: negative eigenvalue " << eig_.values(0);
    fail(ErrorKind::InvalidArgument, msg.str());
  }
  faithful_threshold_ = tol.faithful;
  faithful_ = eig_.values(0) > tol.faithful;
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(identity(dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::normalized(const Operator& m, const StateTolerances& tol) {
  require_square(m, "DensityMatrix::normalized");
  const double tr = m.trace().real();
  if (!(tr > 0.0)) fail(ErrorKind::InvalidArgument, "DensityMatrix::normalized: trace must be positive");
  return DensityMatrix(m / tr, tol);
}

Operator DensityMatrix::log() const {
  if (!faithful_) fail(ErrorKind::InvalidArgument, "log of a non-faithful state");
  return hermitian_function(eig_, [](double p) { return std::log(p); });
}

Operator DensityMatrix::power(double s) const {
  if (!faithful_) fail(ErrorKind::InvalidArgument, "power of a non-faithful state");
  return hermitian_function(eig_, [s](double p) { return std::pow(p, s); });
}

Operator DensityMatrix::inverse() const {
  if (!faithful_) fail(ErrorKind::InvalidArgument, "inverse of a non-faithful state");
  return hermitian_function(eig_, [](double p) { return 1.0 / p; });
}

// ---------------------------------------------------------------------------
// Spectral decomposition

bool SpectralDecomposition::simple() const {
  return std::all_of(multiplicities.begin(), multiplicities.end(), [](int m) { return m == 1; });
}

Operator SpectralDecomposition::reconstruct() const {
  return function([](double v) { return v; });
}

double default_cluster_tol(const Operator& a) {
  const auto eig = eigen_hermitian(a);
  const double radius = eig.values.cwiseAbs().maxCoeff();
  return 1e-10 * (radius + 1.0);
}

SpectralDecomposition spectral_decompose(const Operator& a, double cluster_tol) {
  require_square(a, "spectral_decompose");
  const double scale = std::max(1.0, max_abs(a));
  if (hermiticity_defect(a) > 1e-10 * scale) {
    fail(ErrorKind::InvalidArgument, "spectral_decompose: operator is not Hermitian");
  }
  const auto eig = eigen_hermitian(a);
  if (cluster_tol < 0.0) cluster_tol = 1e-10 * (eig.values.cwiseAbs().maxCoeff() + 1.0);

  SpectralDecomposition out;
  const Index d = a.rows();
  Index start = 0;
  while (start < d) {
    Index stop = start + 1;
    while (stop < d && eig.values(stop) - eig.values(stop - 1) <= cluster_tol) ++stop;
    const Index count = stop - start;
    const auto block = eig.vectors.middleCols(start, count);
    out.values.push_back(eig.values.segment(start, count).mean());
    out.projectors.push_back(block * block.adjoint());
    out.multiplicities.push_back(static_cast<int>(count));
    start = stop;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Brackets, norms, maps

Complex duality_bracket(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "duality_bracket");
  return (a.adjoint() * b).trace();
}

Complex rho_s_inner(const DensityMatrix& rho, const Operator& a, const Operator& b, double s) {
  if (!rho.faithful()) fail(ErrorKind::InvalidArgument, "rho_s_inner: rho must be faithful");
  if (!(s >= 0.0 && s <= 1.0)) fail(ErrorKind::InvalidArgument, "rho_s_inner: s must lie in [0, 1]");
  require_same_dim(rho.matrix(), a, "rho_s_inner");
  require_same_dim(a, b, "rho_s_inner");
  return (rho.power(s) * a.adjoint() * rho.power(1.0 - s) * b).trace();
}

double trace_norm(const Operator& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Operator> svd(a);
  return svd.singularValues().sum();
}

Operator pinch(const SpectralDecomposition& decomp, const Operator& t) {
  require_square(t, "pinch");
  if (decomp.dim() != t.rows()) fail(ErrorKind::InvalidArgument, "pinch: dimension mismatch");
  Operator out = Operator::Zero(t.rows(), t.cols());
  for (const auto& p : decomp.projectors) out += p * t * p;
  return out;
}

Operator modular_apply(const DensityMatrix& rho, const Operator& x) {
  if (!rho.faithful()) fail(ErrorKind::InvalidArgument, "modular_apply: rho must be faithful");
  require_same_dim(rho.matrix(), x, "modular_apply");
  return rho.matrix() * x * rho.inverse();
}

bool check_gens(const SpectralDecomposition& decomp, double gap_tol) {
  std::vector<double> gaps;
  for (std::size_t i = 0; i < decomp.values.size(); ++i)
    for (std::size_t j = i + 1; j < decomp.values.size(); ++j) gaps.push_back(decomp.values[j] - decomp.values[i]);
  std::sort(gaps.begin(), gaps.end());
  for (std::size_t k = 1; k < gaps.size(); ++k)
    if (gaps[k] - gaps[k - 1] <= gap_tol) return false;
  return true;
}

}  // namespace qtmp
