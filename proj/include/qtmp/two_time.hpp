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

// Two-time measurement protocol: measure S, evolve under e^{tL}, measure S
// again. All laws are built from <e^{tL}(P_s rho0 P_s) | P_s'>.

#include <optional>
#include <vector>

#include "qtmp/entropy.hpp"
#include "qtmp/lindblad.hpp"
#include "qtmp/operator.hpp"

namespace qtmp {

/// Law of Delta S = s' - s; support strictly increasing.
struct DeltaDistribution {
  std::vector<double> support;
  std::vector<double> probabilities;

  double total() const;
  double mean() const;
  /// Probability at the support point within tol of sigma (0 if absent).
  double probability_of(double sigma, double tol) const;
};

struct JointLaw {
  std::vector<double> outcomes;
  Eigen::MatrixXd matrix;  // row: first outcome s, column: second outcome s'

  std::vector<double> first_marginal() const;
  std::vector<double> second_marginal() const;
  /// Row-normalized conditional law; nullopt for zero-probability first outcomes.
  std::optional<std::vector<double>> conditional(std::size_t row) const;
};

/// <rho0 | P_s> for each s.
std::vector<double> first_law(const DensityMatrix& rho0, const SpectralDecomposition& s);

JointLaw joint_law(const Lindbladian& l, const DensityMatrix& rho0, const SpectralDecomposition& s, double t);

/// Default merge tolerance for Delta S support points: 1e-9 * spectral range.
double default_gap_tol(const SpectralDecomposition& s);

/// gap_tol < 0 selects default_gap_tol.
DeltaDistribution delta_from_joint(const JointLaw& joint, double gap_tol = -1.0);

DeltaDistribution delta_distribution(const Lindbladian& l, const DensityMatrix& rho0, const SpectralDecomposition& s,
                                     double t, double gap_tol = -1.0);

enum class MgfMethod { Direct, Deformed };

/// E(e^{alpha Delta S}). Direct sums the joint law; Deformed evaluates
/// <e^{t L_alpha}(Diag_S rho0) | 1>.
double mgf(const Lindbladian& l, const DensityMatrix& rho0, const SpectralDecomposition& s, double t, double alpha,
           MgfMethod method);

/// <e^{tL}(Diag_S rho0) | S> - <rho0 | S>
double expected_delta(const Lindbladian& l, const DensityMatrix& rho0, const SpectralDecomposition& s, double t);

struct ExpfluDecomposition {
  double expected = 0.0;         // E^t(Delta S^+) from the pinched formula
  double qm_difference = 0.0;    // <e^{tL} rho0 - rho0 | S^+>
  double flux_integral = 0.0;    // int_0^t <e^{sL} rho0 | I^+> ds
  double entropy_change = 0.0;   // S(e^{tL} rho0) - S(rho0)
  double ep_integral = 0.0;      // int_0^t EP(e^{sL} rho0) ds
  double max_deviation = 0.0;    // among expected, flux_integral, entropy_change - ep_integral
  bool consistent = false;       // max_deviation <= 1e-4
};

/// Requires rho-detailed balance for (rho_plus, L) and a faithful rho0.
ExpfluDecomposition expflu_decomposition(const Lindbladian& l, const DensityMatrix& rho_plus, const DensityMatrix& rho0,
                                         double t);

/// Per-reservoir laws of Delta S_j^+ with S_j^+ = -log rho_j^+ under e^{tL_j}.
std::vector<DeltaDistribution> multi_reservoir_2tmp(const ReservoirDecomposition& decomp, const DensityMatrix& rho0,
                                                    double t);

/// Default small time for the EP estimator: 1e-3 / ||L||.
double default_estimator_time(const ReservoirDecomposition& decomp);

/// -sum_j E^t_{j, rho+}(Delta S_j^+) / t
double ep_estimator(const ReservoirDecomposition& decomp, const DensityMatrix& rho_plus, double t_small);

/// Richardson extrapolation of ep_estimator over t, t/2, ..., t/2^(levels-1).
double ep_estimator_richardson(const ReservoirDecomposition& decomp, const DensityMatrix& rho_plus, double t_small,
                               int levels = 2);

}  // namespace qtmp
