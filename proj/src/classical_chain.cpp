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

#include "qtmp/classical_chain.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "qtmp/detailed_balance.hpp"
#include "qtmp/error.hpp"
#include "qtmp/format.hpp"

namespace qtmp {

namespace {

constexpr double kRateSlack = 1e-12;
constexpr double kRowSumTol = 1e-10;

}  // namespace

Ctmc make_chain(std::vector<double> states, Eigen::RowVectorXd pi0, Eigen::MatrixXd q) {
  const Index n = static_cast<Index>(states.size());
  if (q.rows() != n || q.cols() != n || pi0.size() != n) fail(ErrorKind::InvalidArgument, "make_chain: size mismatch");
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b)
      if (a != b && q(a, b) < -kRateSlack) fail(ErrorKind::InvalidArgument, "make_chain: negative off-diagonal rate");
    if (std::abs(q.row(a).sum()) > kRowSumTol * std::max(1.0, q.row(a).cwiseAbs().maxCoeff()))
      fail(ErrorKind::InvalidArgument, "make_chain: rate matrix rows must sum to zero");
  }
  if (std::abs(pi0.sum() - 1.0) > 1e-9 || (pi0.array() < -kRateSlack).any())
    fail(ErrorKind::InvalidArgument, "make_chain: pi0 must be a probability vector");
  Ctmc out;
  out.weights = Eigen::VectorXd(n);
  for (Index k = 0; k < n; ++k) out.weights(k) = std::exp(-states[k]);
  out.states = std::move(states);
  out.pi0 = std::move(pi0);
  out.q = std::move(q);
  return out;
}

Ctmc extract_chain(const Lindbladian& l, const DensityMatrix& rho, const DensityMatrix& rho0) {
  require_same_dim(l.hamiltonian(), rho.matrix(), "extract_chain");
  require_same_dim(rho.matrix(), rho0.matrix(), "extract_chain");
  if (!rho.faithful() || !rho0.faithful()) fail(ErrorKind::Hypothesis, "extract_chain: states must be faithful");
  const auto s = spectral_decompose(-rho.log());
  const double range = s.values.back() - s.values.front();
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (s.values[k] - s.values[k - 1] <= 1e-8 * range) fail(ErrorKind::Hypothesis, "extract_chain: spectrum of S is degenerate");
  }
  if (!s.simple()) fail(ErrorKind::Hypothesis, "extract_chain: spectrum of S is degenerate");
  const auto db = check_db(rho, l, 1.0);
  if (!db.holds) {
    std::ostringstream msg;
    msg << "extract_chain: detailed balance fails (residual " << db.residual << ")";
    fail(ErrorKind::Hypothesis, msg.str());
  }

  const Index n = static_cast<Index>(s.size());
  Eigen::MatrixXd q(n, n);
  Eigen::RowVectorXd pi0(n);
  const Operator phi_unit = l.kraus_sum();
  for (Index a = 0; a < n; ++a) {
    pi0(a) = std::max(0.0, duality_bracket(rho0.matrix(), s.projectors[a]).real());
    for (Index b = 0; b < n; ++b) {
      q(a, b) = duality_bracket(s.projectors[a], cp_map(l, s.projectors[b])).real();
      if (a == b) q(a, b) -= duality_bracket(s.projectors[a], phi_unit).real();
    }
  }
  // Rows sum to zero analytically; remove rounding so the invariant holds exactly.
  for (Index a = 0; a < n; ++a) q(a, a) -= q.row(a).sum();
  pi0 /= pi0.sum();
  return make_chain(s.values, pi0, q);
}

Eigen::MatrixXd transition_matrix(const Ctmc& chain, double t) {
  if (!(t >= 0.0)) fail(ErrorKind::InvalidArgument, "transition_matrix: t must be nonnegative");
  const Eigen::MatrixXd scaled = chain.q * t;
  return scaled.exp();
}

ClassicalDbReport classical_db_check(const Ctmc& chain, const std::vector<double>& times) {
  ClassicalDbReport out;
  if (chain.size() == 0) return out;
  const Eigen::MatrixXd r = chain.weights.asDiagonal();
  const Eigen::MatrixXd r_inv = chain.weights.cwiseInverse().asDiagonal();
  out.rq_residual = (r * chain.q - chain.q.transpose() * r).cwiseAbs().maxCoeff();
  for (double t : times) {
    const Eigen::MatrixXd p = transition_matrix(chain, t);
    out.symmetry_residual = std::max(out.symmetry_residual, (r * p * r_inv - p.transpose()).cwiseAbs().maxCoeff());
  }
  return out;
}

double classical_mgf(const Ctmc& chain, double t, double alpha) {
  const Eigen::MatrixXd p = transition_matrix(chain, t);
  Eigen::VectorXd right(chain.size());
  Eigen::RowVectorXd left(chain.size());
  for (Index k = 0; k < chain.size(); ++k) {
    left(k) = chain.pi0(k) * std::exp(-alpha * chain.states[k]);
    right(k) = std::exp(alpha * chain.states[k]);
  }
  return left * p * right;
}

double chain_vs_quantum(const Ctmc& chain, const Lindbladian& l, const DensityMatrix& rho0,
                        const SpectralDecomposition& s, const std::vector<double>& t_grid) {
  if (static_cast<Index>(s.size()) != chain.size()) fail(ErrorKind::InvalidArgument, "chain_vs_quantum: size mismatch");
  double worst = 0.0;
  for (double t : t_grid) {
    const Eigen::MatrixXd p = transition_matrix(chain, t);
    const auto joint = joint_law(l, rho0, s, t);
    const Eigen::MatrixXd classical = chain.pi0.transpose().asDiagonal() * p;
    worst = std::max(worst, (classical - joint.matrix).cwiseAbs().maxCoeff());
  }
  return worst;
}

Eigen::RowVectorXd invariant_distribution(const Ctmc& chain, double kernel_tol) {
  const Index n = chain.size();
  if (n == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(chain.q.transpose(), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv(0));
  Index kernel = 0;
  for (Index k = 0; k < n; ++k)
    if (sv(k) <= kernel_tol * scale) ++kernel;
  if (kernel == 0) fail(ErrorKind::Numeric, "invariant_distribution: no kernel found");
  // With a multi-dimensional kernel pick the stationary law reached from the uniform start.
  Eigen::VectorXd v;
  if (kernel == 1) {
    v = svd.matrixV().col(n - 1);
  } else {
    const Eigen::MatrixXd basis = svd.matrixV().rightCols(kernel);
    v = basis * (basis.transpose() * Eigen::VectorXd::Ones(n));
  }
  if (v.sum() < 0.0) v = -v;
  if ((v.array() < -1e-9 * v.cwiseAbs().maxCoeff()).any())
    fail(ErrorKind::Numeric, "invariant_distribution: kernel vector has mixed signs");
  v = v.cwiseMax(0.0);
  return (v / v.sum()).transpose();
}

DeltaDistribution chain_delta_distribution(const Ctmc& chain, double t, double gap_tol) {
  JointLaw joint;
  joint.outcomes = chain.states;
  joint.matrix = chain.pi0.transpose().asDiagonal() * transition_matrix(chain, t);
  joint.matrix = joint.matrix.cwiseMax(0.0);
  return delta_from_joint(joint, gap_tol);
}

void write_chain_csv(std::ostream& out, const Ctmc& chain) {
  for (Index k = 0; k < chain.size(); ++k) out << (k ? "," : "") << format_number(chain.states[k]);
  out << '\n';
  for (Index a = 0; a < chain.size(); ++a) {
    for (Index b = 0; b < chain.size(); ++b) out << (b ? "," : "") << format_number(chain.q(a, b));
    out << '\n';
  }
}

}  // namespace qtmp
