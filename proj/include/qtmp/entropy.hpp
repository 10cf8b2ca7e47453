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

#include <optional>
#include <string>
#include <vector>

#include "qtmp/lindblad.hpp"
#include "qtmp/operator.hpp"

namespace qtmp {

/// A nonnegative real or +infinity. Infinity is an explicit flag, never an
/// overflowed double.
class ExtendedReal {
 public:
  static ExtendedReal finite(double v) { return ExtendedReal(v, false); }
  static ExtendedReal infinity() { return ExtendedReal(0.0, true); }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  /// Throws for the infinite value.
  double value() const;
  /// IEEE infinity for the infinite value; for display and comparisons only.
  double as_double() const;

 private:
  ExtendedReal(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b);

/// -sum p log p, 0 log 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// Ent(mu|nu); +infinity unless ker(nu) is contained in ker(mu).
ExtendedReal relative_entropy(const DensityMatrix& mu, const DensityMatrix& nu);

/// EP_j(rho) = <L_j(rho) | log rho_j^+ - log rho>, with a log 0 = 0 if a = 0
/// and -infinity otherwise, evaluated in the eigenbasis of rho.
ExtendedReal ep_component(const DensityMatrix& rho, const Lindbladian& lj, const DensityMatrix& rho_j_plus);

/// sum_j EP_j(rho)
ExtendedReal entropy_production(const ReservoirDecomposition& decomp, const DensityMatrix& rho);

/// dS/dt = -<L(rho)|log rho> under the same log 0 convention.
ExtendedReal entropy_rate(const Lindbladian& l, const DensityMatrix& rho);

struct EntropyFlux {
  std::string reservoir_label;
  Operator s_plus;  // -log rho_j^+
  Operator i_plus;  // L_j^dagger(S_plus)
  std::optional<double> beta;
  std::optional<Operator> q_plus;      // L_j^dagger(H)
  std::optional<double> free_energy;   // of the KMS state at beta
  bool kms_state_matches = false;      // rho_j^+ equals the KMS state of H at beta
  double kms_flux_residual = 0.0;      // ||I_plus - beta Q_plus||_1
};

struct HeatSpec {
  double beta;
  Operator hamiltonian;
};

EntropyFlux entropy_flux(const Lindbladian& lj, const DensityMatrix& rho_j_plus,
                         const std::optional<HeatSpec>& heat = std::nullopt);

struct BalanceReport {
  ExtendedReal residual = ExtendedReal::finite(0.0);
  double entropy_derivative = 0.0;  // finite difference
  ExtendedReal ep = ExtendedReal::finite(0.0);
  double flux = 0.0;                // sum_j <rho_t | I_j^+>
  bool faithful = true;             // propagated state faithful at t
};

/// Default finite-difference step 1e-5 * max(1, t).
double default_fd_step(double t);

/// |dS/dt - EP(e^{tL} rho) - sum_j <e^{tL} rho | I_j^+>| with dS/dt by
/// central differences of step h (one-sided when t < h).
BalanceReport entropy_balance(const ReservoirDecomposition& decomp, const DensityMatrix& rho, double t, double h = -1.0);

/// Finite-difference derivative of t -> S(e^{tL} rho0).
double entropy_derivative_fd(const Lindbladian& l, const DensityMatrix& rho0, double t, double h = -1.0);

struct FinitenessPoint {
  double t;
  ExtendedReal rate;  // -<L(rho_t)|log rho_t>
  double fd_rate;     // finite-difference dS/dt
};

struct FinitenessReport {
  std::vector<FinitenessPoint> points;
  bool initial_faithful = false;
  bool all_finite = false;
  /// Earliest grid time from which every later value is finite.
  std::optional<double> finite_from;
  double max_abs_rate = 0.0;  // over finite values
  /// False when a faithful initial state produced an infinite rate.
  bool consistent = true;
};

FinitenessReport finiteness_scan(const Lindbladian& l, const DensityMatrix& rho0, const std::vector<double>& grid);

}  // namespace qtmp
