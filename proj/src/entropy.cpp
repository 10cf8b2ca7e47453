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

#include "qtmp/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qtmp/detailed_balance.hpp"
#include "qtmp/error.hpp"

namespace qtmp {

namespace {

// <X | log rho> for Hermitian X, computed in the eigenbasis of rho.
struct LogPairing {
  double finite_part = 0.0;
  bool minus_infinite = false;
};

LogPairing log_pairing(const Operator& x, const DensityMatrix& rho) {
  const double kernel = rho.faithfulness_threshold();
  const double a_tol = 1e-12 * std::max(1.0, max_abs(x));
  const auto& vecs = rho.eigenvectors();
  const auto& vals = rho.eigenvalues();
  LogPairing out;
  for (Index r = 0; r < vals.size(); ++r) {
    const double a = (vecs.col(r).adjoint() * x * vecs.col(r))(0, 0).real();
    if (vals(r) > kernel) {
      out.finite_part += a * std::log(vals(r));
    } else if (a > a_tol) {
      out.minus_infinite = true;
    } else if (a < -a_tol) {
      // The flow out of ker(rho) cannot be negative for a positive semigroup.
      fail(ErrorKind::Numeric, "negative population flow on the kernel of rho");
    }
  }
  return out;
}

constexpr double kNegativeSlack = 1e-9;

ExtendedReal clamp_nonnegative(double v, double scale, const char* what) {
  if (v < -kNegativeSlack * std::max(1.0, scale)) {
    std::ostringstream msg;
    msg << what << " evaluated to " << v << " < 0";
    fail(ErrorKind::Numeric, msg.str());
  }
  return ExtendedReal::finite(std::max(0.0, v));
}

}  // namespace

double ExtendedReal::value() const {
  if (infinite_) fail(ErrorKind::Numeric, "value of an infinite quantity requested");
  return value_;
}

double ExtendedReal::as_double() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b) {
  if (a.is_infinite() || b.is_infinite()) return ExtendedReal::infinity();
  return ExtendedReal::finite(a.value() + b.value());
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (Index k = 0; k < rho.eigenvalues().size(); ++k) {
    const double p = rho.eigenvalues()(k);
    if (p > 0.0) s -= p * std::log(p);
  }
  return std::max(0.0, s);
}

ExtendedReal relative_entropy(const DensityMatrix& mu, const DensityMatrix& nu) {
  require_same_dim(mu.matrix(), nu.matrix(), "relative_entropy");
  const double kernel = nu.faithfulness_threshold();
  const auto& vecs = nu.eigenvectors();
  const auto& vals = nu.eigenvalues();
  double cross = 0.0;  // <mu | log nu> on the support of nu
  for (Index k = 0; k < vals.size(); ++k) {
    const double weight = (vecs.col(k).adjoint() * mu.matrix() * vecs.col(k))(0, 0).real();
    if (vals(k) > kernel) {
      cross += weight * std::log(vals(k));
    } else if (weight > 1e-12) {
      return ExtendedReal::infinity();
    }
  }
  const double value = -von_neumann_entropy(mu) - cross;
  return clamp_nonnegative(value, std::abs(cross), "relative entropy");
}

ExtendedReal ep_component(const DensityMatrix& rho, const Lindbladian& lj, const DensityMatrix& rho_j_plus) {
  if (!rho_j_plus.faithful()) fail(ErrorKind::InvalidArgument, "ep_component: rho_j^+ must be faithful");
  require_same_dim(rho.matrix(), lj.hamiltonian(), "ep_component");
  require_same_dim(rho.matrix(), rho_j_plus.matrix(), "ep_component");
  const Operator flow = hermitian_part(apply_generator(lj, rho.matrix()));
  const double reference = duality_bracket(flow, rho_j_plus.log()).real();
  const auto own = log_pairing(flow, rho);
  if (own.minus_infinite) return ExtendedReal::infinity();
  return clamp_nonnegative(reference - own.finite_part, std::abs(reference) + std::abs(own.finite_part),
                           "entropy production");
}

ExtendedReal entropy_production(const ReservoirDecomposition& decomp, const DensityMatrix& rho) {
  ExtendedReal total = ExtendedReal::finite(0.0);
  for (const auto& part : decomp.parts) total = total + ep_component(rho, part.generator, part.steady_state);
  return total;
}

ExtendedReal entropy_rate(const Lindbladian& l, const DensityMatrix& rho) {
  const Operator flow = hermitian_part(apply_generator(l, rho.matrix()));
  const auto pairing = log_pairing(flow, rho);
  if (pairing.minus_infinite) return ExtendedReal::infinity();
  return ExtendedReal::finite(-pairing.finite_part);
}

EntropyFlux entropy_flux(const Lindbladian& lj, const DensityMatrix& rho_j_plus, const std::optional<HeatSpec>& heat) {
  if (!rho_j_plus.faithful()) fail(ErrorKind::InvalidArgument, "entropy_flux: rho_j^+ must be faithful");
  EntropyFlux out;
  out.reservoir_label = lj.label();
  out.s_plus = -rho_j_plus.log();
  out.i_plus = hermitian_part(apply_dual(lj, out.s_plus));
  if (heat) {
    require_same_dim(heat->hamiltonian, lj.hamiltonian(), "entropy_flux");
    if (!(heat->beta > 0.0)) fail(ErrorKind::InvalidArgument, "entropy_flux: beta must be positive");
    out.beta = heat->beta;
    out.q_plus = hermitian_part(apply_dual(lj, heat->hamiltonian));
    const auto kms = kms_state(heat->hamiltonian, heat->beta);
    out.free_energy = kms.free_energy;
    out.kms_state_matches = max_abs(kms.state.matrix() - rho_j_plus.matrix()) <= 1e-9;
    out.kms_flux_residual = trace_norm(out.i_plus - heat->beta * (*out.q_plus));
  }
  return out;
}

double default_fd_step(double t) { return 1e-5 * std::max(1.0, t); }

double entropy_derivative_fd(const Lindbladian& l, const DensityMatrix& rho0, double t, double h) {
  if (h <= 0.0) h = default_fd_step(t);
  auto entropy_at = [&](double tau) { return von_neumann_entropy(propagate(l, rho0, tau)); };
  if (t >= h) return (entropy_at(t + h) - entropy_at(t - h)) / (2.0 * h);
  return (-3.0 * entropy_at(t) + 4.0 * entropy_at(t + h) - entropy_at(t + 2.0 * h)) / (2.0 * h);
}

BalanceReport entropy_balance(const ReservoirDecomposition& decomp, const DensityMatrix& rho, double t, double h) {
  const Lindbladian& total = decomp.total;
  BalanceReport out;
  const DensityMatrix rho_t = propagate(total, rho, t);
  out.faithful = rho_t.faithful();
  out.entropy_derivative = entropy_derivative_fd(total, rho, t, h);
  out.ep = entropy_production(decomp, rho_t);
  for (const auto& part : decomp.parts) {
    const auto flux = entropy_flux(part.generator, part.steady_state);
    out.flux += duality_bracket(rho_t.matrix(), flux.i_plus).real();
  }
  if (out.ep.is_infinite()) {
    out.residual = ExtendedReal::infinity();
  } else {
    out.residual = ExtendedReal::finite(std::abs(out.entropy_derivative - out.ep.value() - out.flux));
  }
  return out;
}

FinitenessReport finiteness_scan(const Lindbladian& l, const DensityMatrix& rho0, const std::vector<double>& grid) {
  if (!is_relaxing(l)) fail(ErrorKind::Hypothesis, "finiteness_scan: the Lindbladian is not relaxing");
  FinitenessReport out;
  out.initial_faithful = rho0.faithful();
  for (double t : grid) {
    if (t < 0.0) fail(ErrorKind::InvalidArgument, "finiteness_scan: grid times must be nonnegative");
    const DensityMatrix rho_t = propagate(l, rho0, t);
    FinitenessPoint p{t, entropy_rate(l, rho_t), entropy_derivative_fd(l, rho0, t)};
    if (p.rate.is_finite()) out.max_abs_rate = std::max(out.max_abs_rate, std::abs(p.rate.value()));
    out.points.push_back(p);
  }
  out.all_finite = std::all_of(out.points.begin(), out.points.end(), [](const auto& p) { return p.rate.is_finite(); });
  for (std::size_t k = out.points.size(); k-- > 0;) {
    if (out.points[k].rate.is_infinite()) break;
    out.finite_from = out.points[k].t;
  }
  out.consistent = !out.initial_faithful || out.all_finite;
  return out;
}

}  // namespace qtmp
