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

#include "qtmp/qrm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qtmp/error.hpp"

namespace qtmp {

namespace {

const Complex kI(0.0, 1.0);

void require_spec(const QrmSpec& spec) {
  require_square(spec.hamiltonian, "qrm hamiltonian");
  if (!is_hermitian(spec.hamiltonian)) fail(ErrorKind::InvalidArgument, "qrm: hamiltonian must be Hermitian");
  require_same_dim(spec.hamiltonian, spec.reset_state.matrix(), "qrm");
  if (!(spec.gamma > 0.0) || !std::isfinite(spec.gamma)) fail(ErrorKind::InvalidArgument, "qrm: gamma must be positive");
  if (!std::isfinite(spec.lambda)) fail(ErrorKind::InvalidArgument, "qrm: lambda must be finite");
}

void require_time(double t) {
  if (!(t >= 0.0)) fail(ErrorKind::InvalidArgument, "qrm: time must be nonnegative");
}

bool commutes(const Operator& a, const Operator& b) {
  const double scale = std::max(1.0, max_abs(a) * max_abs(b));
  return max_abs(commutator(a, b)) <= 1e-9 * scale;
}

void require_db(const QrmSpec& spec, const char* context) {
  if (!commutes(spec.hamiltonian, spec.reset_state.matrix()))
    fail(ErrorKind::Hypothesis, std::string(context) + ": requires [H, T] = 0 (detailed balance)");
  if (!spec.reset_state.faithful()) fail(ErrorKind::Hypothesis, std::string(context) + ": T must be faithful");
}

SpectralDecomposition entropy_observable(const QrmSpec& spec) { return spectral_decompose(-spec.reset_state.log()); }

}  // namespace

Lindbladian build_qrm(const QrmSpec& spec) {
  require_spec(spec);
  const Index d = spec.hamiltonian.rows();
  const auto& eig = spec.reset_state.eigen();
  std::vector<Operator> kraus;
  for (Index k = 0; k < d; ++k) {
    const double p = std::max(0.0, eig.values(k));
    if (p == 0.0) continue;
    const Eigen::VectorXcd phi = eig.vectors.col(k) * std::sqrt(spec.gamma * p);
    for (Index l = 0; l < d; ++l) {
      Operator g = Operator::Zero(d, d);
      g.col(l) = phi;
      kraus.push_back(std::move(g));
    }
  }
  return Lindbladian(spec.lambda * spec.hamiltonian, std::move(kraus), "qrm");
}

bool check_bohr(const Operator& hamiltonian, double tol) {
  const auto e = eigen_hermitian(hamiltonian).values;
  std::vector<double> gaps;
  for (Index i = 0; i < e.size(); ++i)
    for (Index j = 0; j < e.size(); ++j) {
      const double g = e(i) - e(j);
      if (i != j && std::abs(g) > tol) gaps.push_back(g);
    }
  std::sort(gaps.begin(), gaps.end());
  for (std::size_t k = 1; k < gaps.size(); ++k)
    if (gaps[k] - gaps[k - 1] <= tol) return false;
  return true;
}

std::vector<SpectrumPoint> qrm_spectrum(const QrmSpec& spec) {
  require_spec(spec);
  const Operator h = spec.lambda * spec.hamiltonian;
  if (!check_bohr(h)) fail(ErrorKind::Hypothesis, "qrm_spectrum: Bohr spectrum is not simple");
  const auto e = eigen_hermitian(h).values;
  const double tol = 1e-9 * std::max(1.0, e.cwiseAbs().maxCoeff());
  int zero_count = 0;
  std::vector<SpectrumPoint> out{{Complex(0.0, 0.0), 1}};
  for (Index i = 0; i < e.size(); ++i)
    for (Index j = 0; j < e.size(); ++j) {
      const double alpha = e(i) - e(j);
      if (std::abs(alpha) <= tol) {
        ++zero_count;
      } else {
        out.push_back({Complex(-spec.gamma, -alpha), 1});
      }
    }
  if (zero_count > 1) out.push_back({Complex(-spec.gamma, 0.0), zero_count - 1});
  std::sort(out.begin(), out.end(), [](const SpectrumPoint& a, const SpectrumPoint& b) {
    if (a.value.imag() != b.value.imag()) return a.value.imag() < b.value.imag();
    return a.value.real() < b.value.real();
  });
  return out;
}

DensityMatrix qrm_steady_state(const QrmSpec& spec) {
  require_spec(spec);
  const Index d = spec.hamiltonian.rows();
  const Operator h = spec.lambda * spec.hamiltonian;
  const Operator id = identity(d);
  // (i ad_H + gamma) X = gamma T
  const Eigen::MatrixXcd system = kI * (kron(id, h) - kron(h.transpose(), id)) +
                                  spec.gamma * Eigen::MatrixXcd::Identity(d * d, d * d);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system);
  const Eigen::VectorXcd x = lu.solve(spec.gamma * vectorize(spec.reset_state.matrix()));
  return DensityMatrix(hermitian_part(unvectorize(x, d)));
}

DensityMatrix qrm_propagate_closed(const QrmSpec& spec, const DensityMatrix& rho0, double t) {
  require_time(t);
  require_same_dim(spec.hamiltonian, rho0.matrix(), "qrm_propagate_closed");
  const Operator plus = qrm_steady_state(spec).matrix();
  const Complex mass = rho0.matrix().trace();
  const auto eig = eigen_hermitian(spec.lambda * spec.hamiltonian);
  Eigen::VectorXcd phases(eig.values.size());
  for (Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(-kI * t * eig.values(k));
  const Operator u = eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
  const Operator out = mass * plus + std::exp(-t * spec.gamma) * u * (rho0.matrix() - mass * plus) * u.adjoint();
  StateTolerances loose;
  loose.hermiticity = loose.trace = loose.psd = 1e-8;
  return DensityMatrix(out, loose);
}

Eigen::MatrixXd QrmChain::transition(double t) const {
  require_time(t);
  const Index n = static_cast<Index>(states.size());
  const double decay = std::exp(-t * gamma);
  const Eigen::MatrixXd stationary = Eigen::VectorXd::Ones(n) * invariant;
  return decay * Eigen::MatrixXd::Identity(n, n) + (1.0 - decay) * stationary;
}

QrmChain qrm_chain_closed(const QrmSpec& spec) {
  require_spec(spec);
  require_db(spec, "qrm_chain_closed");
  const auto s = entropy_observable(spec);
  if (!s.simple()) fail(ErrorKind::Hypothesis, "qrm_chain_closed: spectrum of -log T is degenerate");
  const Index n = static_cast<Index>(s.size());
  QrmChain out;
  out.states = s.values;
  out.gamma = spec.gamma;
  out.invariant = Eigen::RowVectorXd(n);
  for (Index k = 0; k < n; ++k) out.invariant(k) = std::exp(-s.values[k]);
  out.q = spec.gamma * (Eigen::VectorXd::Ones(n) * out.invariant - Eigen::MatrixXd::Identity(n, n));
  return out;
}

DeltaDistribution qrm_delta_closed(const QrmSpec& spec, const DensityMatrix& rho0, double t, double gap_tol) {
  require_spec(spec);
  require_time(t);
  require_db(spec, "qrm_delta_closed");
  require_same_dim(spec.hamiltonian, rho0.matrix(), "qrm_delta_closed");
  if (!rho0.faithful()) fail(ErrorKind::Hypothesis, "qrm_delta_closed: initial state must be faithful");
  const auto s = entropy_observable(spec);
  if (gap_tol < 0.0) gap_tol = default_gap_tol(s);
  if (!check_gens(s, gap_tol)) fail(ErrorKind::Hypothesis, "qrm_delta_closed: gaps of -log T are not distinct");
  const double decay = std::exp(-t * spec.gamma);
  const std::size_t n = s.size();
  JointLaw joint{s.values, Eigen::MatrixXd(n, n)};
  for (std::size_t a = 0; a < n; ++a) {
    const double first = duality_bracket(rho0.matrix(), s.projectors[a]).real();
    for (std::size_t b = 0; b < n; ++b) {
      const double reset = duality_bracket(spec.reset_state.matrix(), s.projectors[b]).real();
      joint.matrix(a, b) = first * ((1.0 - decay) * reset + (a == b ? decay : 0.0));
    }
  }
  return delta_from_joint(joint, gap_tol);
}

double qrm_mgf_closed(const QrmSpec& spec, const DensityMatrix& rho0, double t, double alpha) {
  require_spec(spec);
  require_time(t);
  require_db(spec, "qrm_mgf_closed");
  const double decay = std::exp(-t * spec.gamma);
  const double left = duality_bracket(rho0.matrix(), spec.reset_state.power(alpha)).real();
  const double right = spec.reset_state.power(1.0 - alpha).trace().real();
  return left * right * (1.0 - decay) + decay;
}

double qrm_expected_closed(const QrmSpec& spec, const DensityMatrix& rho0, double t) {
  require_spec(spec);
  require_time(t);
  require_db(spec, "qrm_expected_closed");
  const auto s = entropy_observable(spec);
  const Operator diff = spec.reset_state.matrix() - pinch(s, rho0.matrix());
  return (1.0 - std::exp(-t * spec.gamma)) * duality_bracket(diff, s.reconstruct()).real();
}

namespace {

QrmSpec combine(const std::vector<QrmSpec>& parts) {
  double gamma = 0.0;
  Operator t = Operator::Zero(parts.front().hamiltonian.rows(), parts.front().hamiltonian.cols());
  for (const auto& p : parts) {
    gamma += p.gamma;
    t += p.gamma * p.reset_state.matrix();
  }
  return QrmSpec{parts.front().hamiltonian, DensityMatrix(t / gamma), gamma, 1.0};
}

void require_parts(const std::vector<QrmSpec>& parts) {
  if (parts.empty()) fail(ErrorKind::InvalidArgument, "multi-reservoir: no parts");
  double weight = 0.0;
  for (const auto& p : parts) {
    require_spec(p);
    require_same_dim(parts.front().hamiltonian, p.hamiltonian, "multi-reservoir");
    if (max_abs(p.hamiltonian - parts.front().hamiltonian) > 1e-12)
      fail(ErrorKind::InvalidArgument, "multi-reservoir: parts must share the Hamiltonian");
    weight += p.lambda;
  }
  if (std::abs(weight - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "multi-reservoir: hamiltonian weights sum to " << weight << ", expected 1";
    fail(ErrorKind::InvalidArgument, msg.str());
  }
}

}  // namespace

MultiReservoir build_multi_reservoir(const std::vector<QrmSpec>& parts) {
  require_parts(parts);
  std::vector<std::string> warnings;
  std::vector<ReservoirPart> reservoirs;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    if (parts[j].lambda < 0.0) {
      std::ostringstream msg;
      msg << "reservoir " << j << " has negative hamiltonian weight " << parts[j].lambda;
      warnings.push_back(msg.str());
    }
    reservoirs.push_back(ReservoirPart{build_qrm(parts[j]), qrm_steady_state(parts[j]), std::nullopt});
  }
  return MultiReservoir{make_reservoir_decomposition(std::move(reservoirs)), combine(parts), std::move(warnings)};
}

ExtendedReal qrm_multi_ep_closed(const std::vector<QrmSpec>& parts) {
  require_parts(parts);
  const QrmSpec total = combine(parts);
  ExtendedReal sum = ExtendedReal::finite(0.0);
  for (const auto& p : parts) {
    const ExtendedReal pair = relative_entropy(total.reset_state, p.reset_state) +
                              relative_entropy(p.reset_state, total.reset_state);
    sum = sum + (pair.is_infinite() ? pair : ExtendedReal::finite(p.gamma * pair.value()));
  }
  return sum;
}

}  // namespace qtmp
