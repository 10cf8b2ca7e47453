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

#include "qtmp/two_time.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qtmp/detailed_balance.hpp"
#include "qtmp/error.hpp"
#include "qtmp/quadrature.hpp"

namespace qtmp {

namespace {

constexpr double kProbabilitySlack = 1e-12;
constexpr double kNormalizationTol = 1e-9;

void require_time(double t) {
  if (!(t >= 0.0)) fail(ErrorKind::InvalidArgument, "time must be nonnegative");
}

void require_matching(const Lindbladian& l, const DensityMatrix& rho0, const SpectralDecomposition& s) {
  require_same_dim(l.hamiltonian(), rho0.matrix(), "two-time measurement");
  if (s.dim() != l.dim()) fail(ErrorKind::InvalidArgument, "two-time measurement: observable dimension mismatch");
}

double checked_probability(double p, const char* what) {
  if (p < -kProbabilitySlack || p > 1.0 + kProbabilitySlack) {
    std::ostringstream msg;
    msg << what << ": probability " << p << " outside [0, 1]";
    fail(ErrorKind::Numeric, msg.str());
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

// ---------------------------------------------------------------------------

double DeltaDistribution::total() const {
  double sum = 0.0;
  for (double p : probabilities) sum += p;
  return sum;
}

double DeltaDistribution::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < support.size(); ++k) m += support[k] * probabilities[k];
  return m;
}

double DeltaDistribution::probability_of(double sigma, double tol) const {
  for (std::size_t k = 0; k < support.size(); ++k)
    if (std::abs(support[k] - sigma) <= tol) return probabilities[k];
  return 0.0;
}

std::vector<double> JointLaw::first_marginal() const {
  std::vector<double> out(outcomes.size());
  for (Index r = 0; r < matrix.rows(); ++r) out[r] = matrix.row(r).sum();
  return out;
}

std::vector<double> JointLaw::second_marginal() const {
  std::vector<double> out(outcomes.size());
  for (Index c = 0; c < matrix.cols(); ++c) out[c] = matrix.col(c).sum();
  return out;
}

std::optional<std::vector<double>> JointLaw::conditional(std::size_t row) const {
  const double mass = matrix.row(static_cast<Index>(row)).sum();
  if (!(mass > 0.0)) return std::nullopt;
  std::vector<double> out(outcomes.size());
  for (Index c = 0; c < matrix.cols(); ++c) out[c] = matrix(static_cast<Index>(row), c) / mass;
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> first_law(const DensityMatrix& rho0, const SpectralDecomposition& s) {
  if (s.dim() != rho0.dim()) fail(ErrorKind::InvalidArgument, "first_law: dimension mismatch");
  std::vector<double> out;
  out.reserve(s.size());
  for (const auto& p : s.projectors) out.push_back(checked_probability(duality_bracket(rho0.matrix(), p).real(), "first_law"));
  return out;
}

JointLaw joint_law(const Lindbladian& l, const DensityMatrix& rho0, const SpectralDecomposition& s, double t) {
  require_time(t);
  require_matching(l, rho0, s);
  const auto evolution = propagator(l, t);
  const std::size_t n = s.size();
  JointLaw out{s.values, Eigen::MatrixXd(n, n)};
  for (std::size_t a = 0; a < n; ++a) {
    const Operator& pa = s.projectors[a];
    const Operator evolved = evolution.apply(pa * rho0.matrix() * pa);
    for (std::size_t b = 0; b < n; ++b) {
      out.matrix(a, b) = checked_probability(duality_bracket(evolved, s.projectors[b]).real(), "joint_law");
    }
  }
  if (std::abs(out.matrix.sum() - 1.0) > kNormalizationTol) fail(ErrorKind::Numeric, "joint_law: total mass differs from 1");
  return out;
}

double default_gap_tol(const SpectralDecomposition& s) {
  if (s.values.empty()) return 0.0;
  return 1e-9 * std::max(s.values.back() - s.values.front(), 1e-300);
}

DeltaDistribution delta_from_joint(const JointLaw& joint, double gap_tol) {
  if (gap_tol < 0.0) {
    const double range = joint.outcomes.empty() ? 0.0 : joint.outcomes.back() - joint.outcomes.front();
    gap_tol = 1e-9 * range;
  }
  struct Entry {
    double sigma;
    double p;
    bool diagonal;
  };
  std::vector<Entry> entries;
  const std::size_t n = joint.outcomes.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      entries.push_back({a == b ? 0.0 : joint.outcomes[b] - joint.outcomes[a], joint.matrix(a, b), a == b});
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) { return x.sigma < y.sigma; });

  DeltaDistribution out;
  std::size_t k = 0;
  while (k < entries.size()) {
    std::size_t stop = k + 1;
    while (stop < entries.size() && entries[stop].sigma - entries[stop - 1].sigma <= gap_tol) ++stop;
    double p = 0.0;
    double sigma = 0.0;
    bool has_zero = false;
    for (std::size_t m = k; m < stop; ++m) {
      p += entries[m].p;
      sigma += entries[m].sigma;
      has_zero = has_zero || entries[m].diagonal;
    }
    out.support.push_back(has_zero ? 0.0 : sigma / static_cast<double>(stop - k));
    out.probabilities.push_back(p);
    k = stop;
  }
  return out;
}

DeltaDistribution delta_distribution(const Lindbladian& l, const DensityMatrix& rho0, const SpectralDecomposition& s,
                                     double t, double gap_tol) {
  if (gap_tol < 0.0) gap_tol = default_gap_tol(s);
  return delta_from_joint(joint_law(l, rho0, s, t), gap_tol);
}

double mgf(const Lindbladian& l, const DensityMatrix& rho0, const SpectralDecomposition& s, double t, double alpha,
           MgfMethod method) {
  require_time(t);
  require_matching(l, rho0, s);
  if (method == MgfMethod::Direct) {
    const auto joint = joint_law(l, rho0, s, t);
    double sum = 0.0;
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = 0; b < s.size(); ++b) sum += std::exp(alpha * (s.values[b] - s.values[a])) * joint.matrix(a, b);
    return sum;
  }
  const auto deformed = deformed_generator(l, s, alpha);
  const Eigen::VectorXcd v = expm(deformed.matrix, t) * vectorize(pinch(s, rho0.matrix()));
  return unvectorize(v, l.dim()).trace().real();
}

double expected_delta(const Lindbladian& l, const DensityMatrix& rho0, const SpectralDecomposition& s, double t) {
  require_time(t);
  require_matching(l, rho0, s);
  const Operator observable = s.reconstruct();
  const Operator evolved = propagate_operator(l, pinch(s, rho0.matrix()), t);
  return duality_bracket(evolved, observable).real() - duality_bracket(rho0.matrix(), observable).real();
}

ExpfluDecomposition expflu_decomposition(const Lindbladian& l, const DensityMatrix& rho_plus, const DensityMatrix& rho0,
                                         double t) {
  require_time(t);
  const auto db = check_db(rho_plus, l, 1.0);
  if (!db.holds) {
    std::ostringstream msg;
    msg << "expflu_decomposition: detailed balance fails (residual " << db.residual << ")";
    fail(ErrorKind::Hypothesis, msg.str());
  }
  if (!rho0.faithful()) fail(ErrorKind::Hypothesis, "expflu_decomposition: initial state must be faithful");

  const Operator s_plus = -rho_plus.log();
  const auto decomp = spectral_decompose(s_plus);
  const Operator i_plus = hermitian_part(apply_dual(l, s_plus));
  const auto gen = to_superoperator(MapKind::Generator, l);
  auto state_at = [&](double tau) {
    StateTolerances loose;
    loose.hermiticity = loose.trace = loose.psd = 1e-8;
    return DensityMatrix(unvectorize(expm(gen.matrix, tau) * vectorize(rho0.matrix()), l.dim()), loose);
  };

  ExpfluDecomposition out;
  const DensityMatrix rho_t = state_at(t);
  out.expected = expected_delta(l, rho0, decomp, t);
  out.qm_difference = duality_bracket(rho_t.matrix() - rho0.matrix(), s_plus).real();
  out.entropy_change = von_neumann_entropy(rho_t) - von_neumann_entropy(rho0);
  if (t > 0.0) {
    out.flux_integral = adaptive_simpson([&](double tau) { return duality_bracket(state_at(tau).matrix(), i_plus).real(); },
                                         0.0, t).value;
    out.ep_integral = adaptive_simpson([&](double tau) { return ep_component(state_at(tau), l, rho_plus).value(); }, 0.0, t)
                          .value;
  }
  const double balance = out.entropy_change - out.ep_integral;
  out.max_deviation = std::max({std::abs(out.expected - out.flux_integral), std::abs(out.expected - balance),
                                std::abs(out.flux_integral - balance)});
  out.consistent = out.max_deviation <= 1e-4;
  return out;
}

std::vector<DeltaDistribution> multi_reservoir_2tmp(const ReservoirDecomposition& decomp, const DensityMatrix& rho0,
                                                    double t) {
  std::vector<DeltaDistribution> out;
  for (std::size_t j = 0; j < decomp.size(); ++j) {
    const auto& part = decomp.parts[j];
    const auto db = check_db(part.steady_state, part.generator, 1.0);
    if (!db.holds) {
      std::ostringstream msg;
      msg << "multi_reservoir_2tmp: detailed balance fails for reservoir " << j;
      fail(ErrorKind::Hypothesis, msg.str());
    }
    const auto s = spectral_decompose(-part.steady_state.log());
    out.push_back(delta_distribution(part.generator, rho0, s, t));
  }
  return out;
}

double default_estimator_time(const ReservoirDecomposition& decomp) {
  return 1e-3 / std::max(1.0, generator_norm(decomp.total));
}

double ep_estimator(const ReservoirDecomposition& decomp, const DensityMatrix& rho_plus, double t_small) {
  if (!(t_small > 0.0)) fail(ErrorKind::InvalidArgument, "ep_estimator: t_small must be positive");
  const double stationarity = max_abs(apply_generator(decomp.total, rho_plus.matrix()));
  if (stationarity > 1e-9 * std::max(1.0, generator_norm(decomp.total))) {
    fail(ErrorKind::Hypothesis, "ep_estimator: rho_plus is not stationary for the total generator");
  }
  double sum = 0.0;
  for (const auto& part : decomp.parts) {
    const auto s = spectral_decompose(-part.steady_state.log());
    sum += expected_delta(part.generator, rho_plus, s, t_small);
  }
  return -sum / t_small;
}

double ep_estimator_richardson(const ReservoirDecomposition& decomp, const DensityMatrix& rho_plus, double t_small,
                               int levels) {
  if (levels < 1) fail(ErrorKind::InvalidArgument, "ep_estimator_richardson: levels must be positive");
  std::vector<double> table;
  for (int k = 0; k < levels; ++k) table.push_back(ep_estimator(decomp, rho_plus, t_small / std::pow(2.0, k)));
  // Neville-style elimination of the O(t), O(t^2), ... error terms.
  for (int m = 1; m < levels; ++m) {
    const double factor = std::pow(2.0, m);
    for (int k = 0; k + m < levels; ++k) table[k] = (factor * table[k + 1] - table[k]) / (factor - 1.0);
  }
  return table.front();
}

}  // namespace qtmp
