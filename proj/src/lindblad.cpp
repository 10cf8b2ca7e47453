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

#include "qtmp/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "qtmp/error.hpp"

namespace qtmp {

namespace {

const Complex kI(0.0, 1.0);

struct KernelBasis {
  Eigen::MatrixXcd right;  // columns span ker M
  Eigen::MatrixXcd left;   // columns span ker M*
  double largest_singular_value = 0.0;
};

KernelBasis kernel_basis(const Eigen::MatrixXcd& m, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double threshold = rel_tol * smax;
  Index first = sv.size();
  for (Index k = 0; k < sv.size(); ++k) {
    if (sv(k) <= threshold) {
      first = k;
      break;
    }
  }
  const Index count = sv.size() - first;
  return {svd.matrixV().rightCols(count), svd.matrixU().rightCols(count), smax};
}

double min_eigenvalue(const Operator& h) { return eigen_hermitian(h).values(0); }

// Largest c >= 0 with A + c B still PSD (within tol); B Hermitian, ||B|| ~ 1.
double psd_extent(const Operator& a, const Operator& b, double tol) {
  auto ok = [&](double c) { return min_eigenvalue(a + c * b) >= -tol; };
  double lo = 0.0;
  double hi = 1.0;
  while (ok(hi) && hi < 1e12) {
    lo = hi;
    hi *= 2.0;
  }
  if (hi >= 1e12) return lo;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

// Real orthonormal basis (w.r.t. Re tr(A* B)) of the Hermitian part of span(kernel).
std::vector<Operator> hermitian_kernel_basis(const Eigen::MatrixXcd& kernel, Index dim) {
  std::vector<Operator> candidates;
  for (Index k = 0; k < kernel.cols(); ++k) {
    const Operator x = unvectorize(kernel.col(k), dim);
    candidates.push_back(hermitian_part(x));
    candidates.push_back(hermitian_part(kI * x));
  }
  std::vector<Operator> basis;
  for (auto& c : candidates) {
    for (const auto& b : basis) c -= duality_bracket(b, c).real() * b;
    const double norm = c.norm();
    if (norm > 1e-8) basis.push_back(c / norm);
    if (static_cast<Index>(basis.size()) == kernel.cols()) break;
  }
  return basis;
}

void push_unique(std::vector<DensityMatrix>& states, const Operator& candidate) {
  StateTolerances loose;
  loose.psd = 1e-8;
  loose.trace = 1e-8;
  loose.hermiticity = 1e-8;
  for (const auto& s : states)
    if (max_abs(s.matrix() - candidate) < 1e-8) return;
  states.emplace_back(candidate, loose);
}

}  // namespace

// ---------------------------------------------------------------------------

Lindbladian::Lindbladian(Operator hamiltonian, std::vector<Operator> kraus, std::string label)
    : hamiltonian_(std::move(hamiltonian)), kraus_(std::move(kraus)), label_(std::move(label)) {
  require_square(hamiltonian_, "Lindbladian");
  const double scale = std::max(1.0, max_abs(hamiltonian_));
  if (hermiticity_defect(hamiltonian_) > 1e-10 * scale) {
    fail(ErrorKind::InvalidArgument, "Lindbladian: hamiltonian is not Hermitian");
  }
  hamiltonian_ = hermitian_part(hamiltonian_);
  kraus_sum_ = Operator::Zero(dim(), dim());
  for (const auto& g : kraus_) {
    require_same_dim(hamiltonian_, g, "Lindbladian kraus operator");
    kraus_sum_ += g.adjoint() * g;
  }
}

Lindbladian Lindbladian::zero(Index dim) { return Lindbladian(Operator::Zero(dim, dim), {}); }

Operator SuperOperatorMatrix::apply(const Operator& x) const {
  if (x.rows() != dim || x.cols() != dim) fail(ErrorKind::InvalidArgument, "SuperOperatorMatrix::apply: dimension mismatch");
  return unvectorize(matrix * vectorize(x), dim);
}

Eigen::VectorXcd vectorize(const Operator& x) {
  return Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
}

Operator unvectorize(const Eigen::VectorXcd& v, Index dim) {
  return Eigen::Map<const Operator>(v.data(), dim, dim);
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

SuperOperatorMatrix superoperator_from_map(Index dim, const std::function<Operator(const Operator&)>& map) {
  SuperOperatorMatrix out{dim, Eigen::MatrixXcd(dim * dim, dim * dim)};
  for (Index b = 0; b < dim; ++b)
    for (Index a = 0; a < dim; ++a) out.matrix.col(a + b * dim) = vectorize(map(matrix_unit(dim, a, b)));
  return out;
}

// ---------------------------------------------------------------------------

Operator apply_generator(const Lindbladian& l, const Operator& rho) {
  require_same_dim(l.hamiltonian(), rho, "apply_generator");
  Operator out = -kI * commutator(l.hamiltonian(), rho) - 0.5 * anticommutator(l.kraus_sum(), rho);
  for (const auto& g : l.kraus()) out += g * rho * g.adjoint();
  return out;
}

Operator apply_dual(const Lindbladian& l, const Operator& x) {
  require_same_dim(l.hamiltonian(), x, "apply_dual");
  return kI * commutator(l.hamiltonian(), x) - 0.5 * anticommutator(l.kraus_sum(), x) + cp_map(l, x);
}

Operator cp_map(const Lindbladian& l, const Operator& x) {
  require_same_dim(l.hamiltonian(), x, "cp_map");
  Operator out = Operator::Zero(x.rows(), x.cols());
  for (const auto& g : l.kraus()) out += g.adjoint() * x * g;
  return out;
}

Operator cp_map_dual(const Lindbladian& l, const Operator& rho) {
  require_same_dim(l.hamiltonian(), rho, "cp_map_dual");
  Operator out = Operator::Zero(rho.rows(), rho.cols());
  for (const auto& g : l.kraus()) out += g * rho * g.adjoint();
  return out;
}

// vec(A X B) = (B^T kron A) vec(X)
SuperOperatorMatrix to_superoperator(MapKind kind, const Lindbladian& l) {
  const Index d = l.dim();
  const Operator id = identity(d);
  const Operator& h = l.hamiltonian();
  const Operator& k = l.kraus_sum();
  Eigen::MatrixXcd m = -0.5 * (kron(id, k) + kron(k.transpose(), id));
  if (kind == MapKind::Generator) {
    m += -kI * (kron(id, h) - kron(h.transpose(), id));
    for (const auto& g : l.kraus()) m += kron(g.conjugate(), g);
  } else {
    m += kI * (kron(id, h) - kron(h.transpose(), id));
    for (const auto& g : l.kraus()) m += kron(g.transpose(), g.adjoint());
  }
  return {d, std::move(m)};
}

SuperOperatorMatrix cp_superoperator(const Lindbladian& l) {
  const Index d = l.dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (const auto& g : l.kraus()) m += kron(g.transpose(), g.adjoint());
  return {d, std::move(m)};
}

SuperOperatorMatrix deformed_generator(const Lindbladian& l, const SpectralDecomposition& s, double alpha) {
  if (s.dim() != l.dim()) fail(ErrorKind::InvalidArgument, "deformed_generator: dimension mismatch");
  const Index d = l.dim();
  const Operator id = identity(d);
  const Operator up = s.function([alpha](double v) { return std::exp(alpha * v); });
  const Operator down = s.function([alpha](double v) { return std::exp(-alpha * v); });
  auto gen = to_superoperator(MapKind::Generator, l);
  gen.matrix = kron(up.transpose(), id) * gen.matrix * kron(down.transpose(), id);
  return gen;
}

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& m, double t) {
  Eigen::MatrixXcd scaled = t * m;
  return scaled.exp();
}

SuperOperatorMatrix propagator(const Lindbladian& l, double t) {
  if (!(t >= 0.0)) fail(ErrorKind::InvalidArgument, "propagate: time must be nonnegative");
  const auto gen = to_superoperator(MapKind::Generator, l);
  return {l.dim(), expm(gen.matrix, t)};
}

Operator propagate_operator(const Lindbladian& l, const Operator& x, double t) {
  require_same_dim(l.hamiltonian(), x, "propagate");
  if (t == 0.0) return x;
  return propagator(l, t).apply(x);
}

DensityMatrix propagate(const Lindbladian& l, const DensityMatrix& rho0, double t) {
  StateTolerances loose;
  loose.hermiticity = 1e-8;
  loose.trace = 1e-8;
  loose.psd = 1e-8;
  return DensityMatrix(propagate_operator(l, rho0.matrix(), t), loose);
}

// ---------------------------------------------------------------------------

SteadyStateResult steady_states(const Lindbladian& l, double kernel_tol) {
  const Index d = l.dim();
  const auto gen = to_superoperator(MapKind::Generator, l);
  const auto kb = kernel_basis(gen.matrix, kernel_tol);

  SteadyStateResult out;
  out.kernel_dimension = kb.right.cols();
  if (out.kernel_dimension == 0) {
    fail(ErrorKind::Numeric, "steady_states: generator has no numerical kernel at the requested tolerance");
  }

  // Ergodic projection of the maximally mixed state: P0 = K (W* K)^-1 W*.
  const Eigen::MatrixXcd gram = kb.left.adjoint() * kb.right;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(gram);
  std::optional<Operator> base;
  if (lu.isInvertible()) {
    const Eigen::VectorXcd v = kb.right * lu.solve(kb.left.adjoint() * vectorize(identity(d) / static_cast<double>(d)));
    Operator x = hermitian_part(unvectorize(v, d));
    const double tr = x.trace().real();
    if (tr > 1e-12 && min_eigenvalue(x / tr) >= -1e-9) {
      base = x / tr;
      push_unique(out.states, *base);
    }
  } else {
    out.notes.push_back("zero eigenvalue is not semisimple at this tolerance; skipped ergodic projection");
  }

  const auto herm = hermitian_kernel_basis(kb.right, d);
  for (std::size_t k = 0; k < herm.size(); ++k) {
    const double tr = herm[k].trace().real();
    if (std::abs(tr) > 1e-10) {
      const Operator x = herm[k] / tr;
      if (min_eigenvalue(x) >= -1e-9) {
        push_unique(out.states, x);
        if (!base) base = x;
        continue;
      }
    }
    if (!base) {
      std::ostringstream note;
      note << "kernel vector " << k << " admits no positive trace-one representative";
      out.notes.push_back(note.str());
    }
  }

  // Pairwise combinations with the base state reach the extremal states of
  // each two-dimensional face.
  if (base && herm.size() > 1) {
    for (const auto& h : herm) {
      Operator b = h - h.trace().real() * (*base);
      const double norm = b.norm();
      if (norm < 1e-8) continue;
      b /= norm;
      for (double sign : {1.0, -1.0}) {
        const double c = psd_extent(*base, sign * b, 1e-12);
        if (c > 1e-10) push_unique(out.states, *base + sign * c * b);
      }
    }
  }

  if (out.states.empty()) fail(ErrorKind::Numeric, "steady_states: no positive representative found in the kernel");
  return out;
}

DensityMatrix unique_steady_state(const Lindbladian& l, double kernel_tol) {
  auto res = steady_states(l, kernel_tol);
  if (res.kernel_dimension != 1) {
    std::ostringstream msg;
    msg << "steady state is not unique (kernel dimension " << res.kernel_dimension << ")";
    fail(ErrorKind::Hypothesis, msg.str());
  }
  return res.states.front();
}

bool is_relaxing(const Lindbladian& l, double tol) {
  const auto gen = to_superoperator(MapKind::Generator, l);
  const auto kb = kernel_basis(gen.matrix, tol);
  if (kb.right.cols() != 1) return false;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(gen.matrix, false);
  Eigen::VectorXcd ev = solver.eigenvalues();
  Index zero = 0;
  ev.cwiseAbs().minCoeff(&zero);
  const double scale = std::max(1.0, kb.largest_singular_value);
  for (Index k = 0; k < ev.size(); ++k) {
    if (k == zero) continue;
    if (!(ev(k).real() < -tol * scale)) return false;
  }
  return true;
}

double spectral_gap(const Lindbladian& l, double tol) {
  const auto gen = to_superoperator(MapKind::Generator, l);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(gen.matrix, false);
  const double scale = std::max(1.0, generator_norm(l));
  double gap = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const Complex ev = solver.eigenvalues()(k);
    if (std::abs(ev) <= tol * scale) continue;
    gap = std::min(gap, -ev.real());
  }
  return gap;
}

double generator_norm(const Lindbladian& l) {
  const auto gen = to_superoperator(MapKind::Generator, l);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gen.matrix);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

ReservoirDecomposition make_reservoir_decomposition(std::vector<ReservoirPart> parts, double tol) {
  if (parts.empty()) fail(ErrorKind::InvalidArgument, "reservoir decomposition needs at least one part");
  const Index d = parts.front().generator.dim();
  Operator h = Operator::Zero(d, d);
  std::vector<Operator> kraus;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const auto& part = parts[j];
    if (part.generator.dim() != d || part.steady_state.dim() != d) {
      fail(ErrorKind::InvalidArgument, "reservoir decomposition: dimension mismatch");
    }
    if (!part.steady_state.faithful()) {
      std::ostringstream msg;
      msg << "reservoir " << j << ": invariant state is not faithful";
      fail(ErrorKind::Hypothesis, msg.str());
    }
    const double residual = max_abs(apply_generator(part.generator, part.steady_state.matrix()));
    if (residual > tol * std::max(1.0, generator_norm(part.generator))) {
      std::ostringstream msg;
      msg << "reservoir " << j << ": L_j(rho_j) = " << residual << " is not zero";
      fail(ErrorKind::Hypothesis, msg.str());
    }
    h += part.generator.hamiltonian();
    kraus.insert(kraus.end(), part.generator.kraus().begin(), part.generator.kraus().end());
  }
  Lindbladian total(h, std::move(kraus), "total");
  return {std::move(parts), std::move(total)};
}

}  // namespace qtmp
