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

#include "qtmp/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qtmp/classical_chain.hpp"
#include "qtmp/detailed_balance.hpp"
#include "qtmp/entropy.hpp"
#include "qtmp/error.hpp"
#include "qtmp/format.hpp"
#include "qtmp/qrm.hpp"
#include "qtmp/random_models.hpp"
#include "qtmp/two_time.hpp"

namespace qtmp {

namespace {

using Cells = std::vector<std::string>;

std::string num(double v) { return format_number(v); }
std::string num(Index v) { return std::to_string(v); }
std::string num(std::size_t v) { return std::to_string(v); }

std::string escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void write_row(std::ostream& out, const Cells& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << escape(cells[k]);
  out << '\n';
}

struct Context {
  const Scenario& scenario;
  const BuiltModel& model;
  const RunOptions& options;
  double tol;
  std::ostream& out;
  std::ostream& err;
};

const ReservoirDecomposition& decomposition(const Context& c) { return c.model.decomposition; }

std::string label_of(const ReservoirPart& part, std::size_t j) {
  return part.generator.label().empty() ? "r" + std::to_string(j) : part.generator.label();
}

SpectralDecomposition entropy_observable(const DensityMatrix& rho) { return spectral_decompose(-rho.log()); }

double scale_of(const Lindbladian& l) { return std::max(1.0, generator_norm(l)); }

const char* db_variant_name(double s) { return s == 1.0 ? "rho" : (s == 0.5 ? "kms" : "rho_s"); }

// ---------------------------------------------------------------------------
// QRM closed form vs generic engine

struct Comparison {
  std::string quantity;
  std::optional<double> t;
  std::optional<double> alpha;
  double closed = 0.0;
  double generic = 0.0;
  double diff = 0.0;
  double threshold = 0.0;
  std::string note;
  bool skipped = false;
};

double distribution_distance(const DeltaDistribution& a, const DeltaDistribution& b, double tol) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.support.size(); ++k)
    worst = std::max(worst, std::abs(a.probabilities[k] - b.probability_of(a.support[k], tol)));
  for (std::size_t k = 0; k < b.support.size(); ++k)
    worst = std::max(worst, std::abs(b.probabilities[k] - a.probability_of(b.support[k], tol)));
  return worst;
}

double spectrum_distance(const std::vector<SpectrumPoint>& closed, const Eigen::VectorXcd& numeric) {
  std::vector<Complex> expanded;
  for (const auto& p : closed)
    for (int m = 0; m < p.multiplicity; ++m) expanded.push_back(p.value);
  if (static_cast<Index>(expanded.size()) != numeric.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(expanded.size(), false);
  double worst = 0.0;
  for (Index k = 0; k < numeric.size(); ++k) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < expanded.size(); ++m) {
      if (used[m]) continue;
      const double d = std::abs(expanded[m] - numeric(k));
      if (d < best_d) {
        best_d = d;
        best = m;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

std::vector<Comparison> qrm_comparisons(const Context& c) {
  const auto& parts = *c.model.qrm_parts;
  const auto multi = build_multi_reservoir(parts);
  const QrmSpec& spec = multi.combined;
  const Lindbladian& total = decomposition(c).total;
  const DensityMatrix& rho0 = c.model.initial_state;
  std::vector<Comparison> rows;
  auto matrices = [&](const std::string& q, std::optional<double> t, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    rows.push_back({q, t, std::nullopt, a.norm(), b.norm(), (a - b).cwiseAbs().maxCoeff(), c.tol, {}, false});
  };
  auto scalars = [&](const std::string& q, std::optional<double> t, std::optional<double> alpha, double a, double b) {
    rows.push_back({q, t, alpha, a, b, std::abs(a - b), c.tol * std::max(1.0, std::abs(a)), {}, false});
  };
  auto skip = [&](const std::string& q, const std::string& why) {
    Comparison r;
    r.quantity = q;
    r.note = why;
    r.skipped = true;
    rows.push_back(r);
  };

  matrices("steady_state", std::nullopt, qrm_steady_state(spec).matrix(),
           unique_steady_state(total, c.scenario.tolerances.kernel).matrix());

  if (check_bohr(spec.hamiltonian)) {
    const auto closed = qrm_spectrum(spec);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(to_superoperator(MapKind::Generator, total).matrix, false);
    double closed_sum = 0.0;
    for (const auto& p : closed) closed_sum += p.multiplicity * p.value.real();
    const Eigen::VectorXcd numeric = solver.eigenvalues();
    rows.push_back({"spectrum", std::nullopt, std::nullopt, closed_sum, numeric.real().sum(),
                    spectrum_distance(closed, numeric), std::max(c.tol, 1e-8) * std::max(1.0, spec.gamma), {}, false});
    scalars("spectral_gap", std::nullopt, std::nullopt, spec.gamma, spectral_gap(total));
  } else {
    skip("spectrum", "Bohr spectrum of H is not simple");
  }

  for (double t : c.scenario.times)
    matrices("propagator", t, qrm_propagate_closed(spec, rho0, t).matrix(), propagate(total, rho0, t).matrix());

  const Operator& h = spec.hamiltonian;
  const bool commuting = max_abs(commutator(h, spec.reset_state.matrix())) <= 1e-9 * std::max(1.0, max_abs(h));
  if (!commuting || !spec.reset_state.faithful()) {
    for (const char* q : {"chain_q", "transition", "delta_law", "mgf", "expected_delta"})
      skip(q, "requires [H,T] = 0 and faithful T");
  } else {
    const auto s = entropy_observable(spec.reset_state);
    if (s.simple() && rho0.faithful()) {
      const auto closed = qrm_chain_closed(spec);
      const auto chain = extract_chain(total, spec.reset_state, rho0);
      matrices("chain_q", std::nullopt, closed.q.cast<Complex>(), chain.q.cast<Complex>());
      for (double t : c.scenario.times)
        matrices("transition", t, closed.transition(t).cast<Complex>(), transition_matrix(chain, t).cast<Complex>());
    } else {
      skip("chain_q", "requires simple spectrum of -log T and faithful initial state");
      skip("transition", "requires simple spectrum of -log T and faithful initial state");
    }
    const double gap_tol = default_gap_tol(s);
    if (rho0.faithful() && check_gens(s, gap_tol)) {
      for (double t : c.scenario.times) {
        const auto closed = qrm_delta_closed(spec, rho0, t);
        const auto generic = delta_distribution(total, rho0, s, t);
        rows.push_back({"delta_law", t, std::nullopt, closed.mean(), generic.mean(),
                        distribution_distance(closed, generic, 10.0 * gap_tol), c.tol, {}, false});
      }
    } else {
      skip("delta_law", "requires faithful initial state and distinct gaps of -log T");
    }
    for (double t : c.scenario.times) {
      for (double alpha : c.scenario.alphas)
        scalars("mgf", t, alpha, qrm_mgf_closed(spec, rho0, t, alpha), mgf(total, rho0, s, t, alpha, MgfMethod::Direct));
      scalars("expected_delta", t, std::nullopt, qrm_expected_closed(spec, rho0, t), expected_delta(total, rho0, s, t));
    }
  }

  if (parts.size() > 1) {
    bool all_commuting = true;
    for (const auto& p : parts)
      all_commuting = all_commuting && max_abs(commutator(h, p.reset_state.matrix())) <= 1e-9 * std::max(1.0, max_abs(h));
    if (all_commuting) {
      const double closed = qrm_multi_ep_closed(parts).value();
      scalars("entropy_production", std::nullopt, std::nullopt, closed,
              entropy_production(decomposition(c), spec.reset_state).value());
      const double t0 = 1e-2 / std::max(1.0, spec.gamma);
      const double estimate = ep_estimator_richardson(decomposition(c), spec.reset_state, t0, 3);
      rows.push_back({"ep_estimator", t0, std::nullopt, closed, estimate, std::abs(closed - estimate),
                      1e-5 * std::max(std::abs(closed), 1e-12), "richardson over t, t/2, t/4", false});
    } else {
      skip("entropy_production", "requires [H,T_j] = 0 for every reservoir");
      skip("ep_estimator", "requires [H,T_j] = 0 for every reservoir");
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// commands

int cmd_steady(const Context& c) {
  const Lindbladian& total = decomposition(c).total;
  const auto result = steady_states(total, c.scenario.tolerances.kernel);
  write_row(c.out, {"quantity", "index", "row", "col", "re", "im"});
  write_row(c.out, {"kernel_dimension", "0", "", "", num(result.kernel_dimension), "0"});
  const bool relaxing = is_relaxing(total, c.scenario.tolerances.kernel);
  write_row(c.out, {"relaxing", "0", "", "", relaxing ? "1" : "0", "0"});
  if (relaxing) write_row(c.out, {"spectral_gap", "0", "", "", num(spectral_gap(total, c.scenario.tolerances.kernel)), "0"});
  for (std::size_t k = 0; k < result.states.size(); ++k) {
    const Operator& m = result.states[k].matrix();
    for (Index r = 0; r < m.rows(); ++r)
      for (Index col = 0; col < m.cols(); ++col)
        write_row(c.out, {"state", num(k), num(r), num(col), num(m(r, col).real()), num(m(r, col).imag())});
  }
  for (const auto& note : result.notes) c.err << "note: " << note << '\n';
  return kExitOk;
}

int cmd_evolve(const Context& c) {
  const auto& decomp = decomposition(c);
  const Index d = c.scenario.dimension;
  Cells header{"t", "trace", "min_eigenvalue", "entropy", "entropy_production"};
  for (Index r = 0; r < d; ++r)
    for (Index col = 0; col < d; ++col) {
      const std::string name = "rho_" + std::to_string(r) + "_" + std::to_string(col);
      header.push_back(name + "_re");
      header.push_back(name + "_im");
    }
  write_row(c.out, header);
  for (double t : c.scenario.times) {
    const DensityMatrix rho = propagate(decomp.total, c.model.initial_state, t);
    Cells row{num(t), num(rho.matrix().trace().real()), num(rho.min_eigenvalue()), num(von_neumann_entropy(rho)),
              num(entropy_production(decomp, rho).as_double())};
    for (Index r = 0; r < d; ++r)
      for (Index col = 0; col < d; ++col) {
        row.push_back(num(rho.matrix()(r, col).real()));
        row.push_back(num(rho.matrix()(r, col).imag()));
      }
    write_row(c.out, row);
  }
  return kExitOk;
}

int cmd_db_check(const Context& c) {
  write_row(c.out, {"reservoir", "label", "s", "variant", "holds", "residual", "threshold", "stationarity_residual"});
  const auto& decomp = decomposition(c);
  for (std::size_t j = 0; j < decomp.size(); ++j) {
    const auto& part = decomp.parts[j];
    for (double s : {0.0, 0.5, 1.0}) {
      const auto report = check_db(part.steady_state, part.generator, s, c.scenario.tolerances.db);
      write_row(c.out, {num(j), label_of(part, j), num(s), db_variant_name(s), report.holds ? "true" : "false",
                        num(report.residual), num(report.threshold), num(report.stationarity_residual)});
      if (report.warning) c.err << "warning: " << label_of(part, j) << ": " << *report.warning << '\n';
    }
  }
  return kExitOk;
}

std::optional<std::string> db_violation(const Context& c, const ReservoirPart& part) {
  const auto report = check_db(part.steady_state, part.generator, 1.0, c.scenario.tolerances.db);
  if (report.holds) return std::nullopt;
  return "detailed balance (s=1) fails, residual " + num(report.residual);
}

int cmd_ttm(const Context& c) {
  write_row(c.out, {"reservoir", "label", "t", "kind", "sigma", "value", "note"});
  const auto& decomp = decomposition(c);
  int code = kExitOk;
  for (std::size_t j = 0; j < decomp.size(); ++j) {
    const auto& part = decomp.parts[j];
    if (auto why = db_violation(c, part)) {
      write_row(c.out, {num(j), label_of(part, j), "", "hypothesis", "", "", *why});
      code = kExitHypothesis;
      continue;
    }
    const auto s = entropy_observable(part.steady_state);
    for (double t : c.scenario.times) {
      const auto law = delta_distribution(part.generator, c.model.initial_state, s, t);
      for (std::size_t k = 0; k < law.support.size(); ++k)
        write_row(c.out, {num(j), label_of(part, j), num(t), "probability", num(law.support[k]), num(law.probabilities[k]), ""});
      write_row(c.out, {num(j), label_of(part, j), num(t), "expected", "",
                        num(expected_delta(part.generator, c.model.initial_state, s, t)), ""});
    }
  }
  return code;
}

int cmd_mgf(const Context& c) {
  write_row(c.out, {"reservoir", "label", "t", "alpha", "direct", "deformed", "classical", "note"});
  const auto& decomp = decomposition(c);
  int code = kExitOk;
  for (std::size_t j = 0; j < decomp.size(); ++j) {
    const auto& part = decomp.parts[j];
    if (auto why = db_violation(c, part)) {
      write_row(c.out, {num(j), label_of(part, j), "", "", "", "", "", *why});
      code = kExitHypothesis;
      continue;
    }
    const auto s = entropy_observable(part.steady_state);
    std::optional<Ctmc> chain;
    std::string note;
    try {
      chain = extract_chain(part.generator, part.steady_state, c.model.initial_state);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Hypothesis) throw;
      note = std::string("classical: ") + e.what();
    }
    for (double t : c.scenario.times)
      for (double alpha : c.scenario.alphas) {
        const auto& rho0 = c.model.initial_state;
        write_row(c.out, {num(j), label_of(part, j), num(t), num(alpha),
                          num(mgf(part.generator, rho0, s, t, alpha, MgfMethod::Direct)),
                          num(mgf(part.generator, rho0, s, t, alpha, MgfMethod::Deformed)),
                          chain ? num(classical_mgf(*chain, t, alpha)) : "", note});
      }
  }
  return code;
}

int cmd_chain(const Context& c) {
  const auto& decomp = decomposition(c);
  int code = kExitOk;
  if (!c.options.chain_matrix)
    write_row(c.out, {"reservoir", "label", "quantity", "i", "j", "value", "note"});
  bool first_block = true;
  for (std::size_t j = 0; j < decomp.size(); ++j) {
    const auto& part = decomp.parts[j];
    const std::string label = label_of(part, j);
    Ctmc chain;
    try {
      chain = extract_chain(part.generator, part.steady_state, c.model.initial_state);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Hypothesis) throw;
      if (c.options.chain_matrix) {
        c.err << "hypothesis: " << label << ": " << e.what() << '\n';
      } else {
        write_row(c.out, {num(j), label, "hypothesis", "", "", "", e.what()});
      }
      code = kExitHypothesis;
      continue;
    }
    if (c.options.chain_matrix) {
      if (!first_block) c.out << '\n';
      first_block = false;
      write_chain_csv(c.out, chain);
      continue;
    }
    const auto db = classical_db_check(chain, c.scenario.times);
    const auto invariant = invariant_distribution(chain, c.scenario.tolerances.kernel);
    for (Index a = 0; a < chain.size(); ++a) {
      write_row(c.out, {num(j), label, "state", num(a), "", num(chain.states[a]), ""});
      write_row(c.out, {num(j), label, "pi0", num(a), "", num(chain.pi0(a)), ""});
      write_row(c.out, {num(j), label, "invariant", num(a), "", num(invariant(a)), ""});
    }
    for (Index a = 0; a < chain.size(); ++a)
      for (Index b = 0; b < chain.size(); ++b) write_row(c.out, {num(j), label, "rate", num(a), num(b), num(chain.q(a, b)), ""});
    write_row(c.out, {num(j), label, "rq_residual", "", "", num(db.rq_residual), ""});
    write_row(c.out, {num(j), label, "symmetry_residual", "", "", num(db.symmetry_residual), ""});
  }
  return code;
}

std::string optional_num(const std::optional<double>& v) { return v ? num(*v) : ""; }

int cmd_qrm_demo(const Context& c) {
  write_row(c.out, {"quantity", "t", "alpha", "closed", "generic", "abs_diff", "threshold", "note"});
  if (!c.model.qrm_parts) {
    write_row(c.out, {"hypothesis", "", "", "", "", "", "", "every reservoir must be a qrm reservoir"});
    return kExitHypothesis;
  }
  for (const auto& r : qrm_comparisons(c)) {
    if (r.skipped) {
      write_row(c.out, {r.quantity, "", "", "", "", "", "", r.note});
    } else {
      write_row(c.out, {r.quantity, optional_num(r.t), optional_num(r.alpha), num(r.closed), num(r.generic), num(r.diff),
                        num(r.threshold), r.note});
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

class Verifier {
 public:
  explicit Verifier(const Context& c) : c_(c) { write_row(c_.out, {"check", "status", "value", "threshold", "detail"}); }

  void row(const std::string& check, const std::string& status, const std::string& value, const std::string& threshold,
           const std::string& detail) {
    if (status == "fail") failed_ = true;
    write_row(c_.out, {check, status, value, threshold, detail});
  }

  // Passes when value <= threshold.
  void bound(const std::string& check, double value, double threshold, const std::string& detail = {}) {
    row(check, value <= threshold ? "pass" : "fail", num(value), num(threshold), detail);
  }

  void guarded(const std::string& check, const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      row(check, e.kind() == ErrorKind::Hypothesis ? "skip" : "fail", "", "", e.what());
    } catch (const std::exception& e) {
      row(check, "fail", "", "", e.what());
    }
  }

  bool failed() const { return failed_; }

 private:
  const Context& c_;
  bool failed_ = false;
};

void verify_cptp(const Context& c, Verifier& v) {
  const Lindbladian& total = decomposition(c).total;
  v.guarded("cptp", [&] {
    double trace_err = 0.0, min_eig = 1.0, semigroup = 0.0;
    for (double t : c.scenario.times) {
      const DensityMatrix rho = propagate(total, c.model.initial_state, t);
      trace_err = std::max(trace_err, std::abs(rho.matrix().trace().real() - 1.0));
      min_eig = std::min(min_eig, rho.min_eigenvalue());
      const auto step = propagator(total, t);
      semigroup = std::max(semigroup, (step.matrix * step.matrix - propagator(total, 2.0 * t).matrix).cwiseAbs().maxCoeff());
    }
    v.bound("cptp.trace", trace_err, 1e-10);
    v.bound("cptp.positivity", -min_eig, 1e-9, "negated minimum eigenvalue");
    v.bound("cptp.semigroup", semigroup, 1e-9);
  });
  v.guarded("random.cptp", [&] {
    Rng rng(c.options.seed);
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const Lindbladian l = random_lindbladian(c.scenario.dimension, rng, 2);
      const DensityMatrix rho = random_density_matrix(c.scenario.dimension, rng);
      for (double t : {0.1, 1.0, 10.0}) {
        const DensityMatrix rt = propagate(l, rho, t);
        worst = std::max({worst, std::abs(rt.matrix().trace().real() - 1.0), -rt.min_eigenvalue()});
        const auto step = propagator(l, t);
        worst = std::max(worst, (step.matrix * step.matrix - propagator(l, 2.0 * t).matrix).cwiseAbs().maxCoeff());
      }
    }
    v.bound("random.cptp", worst, 1e-9, "seed " + std::to_string(c.options.seed));
  });
}

void verify_reservoir(const Context& c, Verifier& v, std::size_t j) {
  const auto& part = decomposition(c).parts[j];
  const std::string tag = "[" + label_of(part, j) + "]";
  const double scale = scale_of(part.generator);
  const DensityMatrix& rho0 = c.model.initial_state;

  v.bound("stationarity" + tag, max_abs(apply_generator(part.generator, part.steady_state.matrix())), c.tol * scale);
  for (double s : {0.0, 0.5, 1.0}) {
    const auto report = check_db(part.steady_state, part.generator, s, c.scenario.tolerances.db);
    v.row("db" + tag + ".s=" + num(s), "info", num(report.residual), num(report.threshold),
          report.holds ? "holds" : "fails");
  }
  const auto why = db_violation(c, part);
  const std::vector<std::string> dependent{"pinch_commutation", "commutation_identities", "expflu", "chain", "mgf", "symmetry"};
  if (why) {
    for (const auto& name : dependent) v.row(name + tag, "skip", "", "", *why);
    return;
  }
  const auto s = entropy_observable(part.steady_state);

  v.guarded("pinch_commutation" + tag, [&] {
    v.bound("pinch_commutation" + tag, check_pinch_commutation(part.steady_state, part.generator), c.tol * scale);
  });
  v.guarded("commutation_identities" + tag, [&] {
    const auto r = commutation_identities(part.steady_state, part.generator);
    v.bound("commutation_identities" + tag, std::max(r.phi_unit, r.hamiltonian), c.tol * scale);
  });
  v.guarded("expflu" + tag, [&] {
    const double t = c.scenario.times.back();
    const auto e = expflu_decomposition(part.generator, part.steady_state, rho0, t);
    v.bound("expflu.expectation" + tag, std::abs(e.expected - e.qm_difference), c.tol * std::max(1.0, std::abs(e.expected)),
            "t=" + num(t));
    v.bound("expflu.decomposition" + tag, e.max_deviation, 1e-4, "quadrature-limited");
  });
  v.guarded("chain" + tag, [&] {
    const auto chain = extract_chain(part.generator, part.steady_state, rho0);
    v.bound("chain.joint_law" + tag, chain_vs_quantum(chain, part.generator, rho0, s, c.scenario.times), c.tol);
    v.bound("chain.row_sums" + tag, chain.q.rowwise().sum().cwiseAbs().maxCoeff(), 1e-10);
    const auto db = classical_db_check(chain, c.scenario.times);
    const double qscale = std::max(1.0, chain.q.cwiseAbs().maxCoeff());
    v.bound("chain.classical_db" + tag, std::max(db.rq_residual, db.symmetry_residual), c.tol * qscale);
    const auto pi = invariant_distribution(chain, c.scenario.tolerances.kernel);
    v.bound("chain.invariant" + tag, (pi.transpose() - chain.weights).cwiseAbs().maxCoeff(), std::max(1e-10, c.tol));
  });
  v.guarded("mgf" + tag, [&] {
    std::optional<Ctmc> chain;
    try {
      chain = extract_chain(part.generator, part.steady_state, rho0);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Hypothesis) throw;
    }
    double paths = 0.0, unit = 0.0;
    for (double t : c.scenario.times) {
      for (double alpha : c.scenario.alphas) {
        const double direct = mgf(part.generator, rho0, s, t, alpha, MgfMethod::Direct);
        const double deformed = mgf(part.generator, rho0, s, t, alpha, MgfMethod::Deformed);
        double worst = std::abs(direct - deformed);
        if (chain) worst = std::max(worst, std::abs(direct - classical_mgf(*chain, t, alpha)));
        paths = std::max(paths, worst / std::max(1.0, std::abs(direct)));
      }
      unit = std::max({unit, std::abs(mgf(part.generator, rho0, s, t, 0.0, MgfMethod::Direct) - 1.0),
                       std::abs(mgf(part.generator, rho0, s, t, 0.0, MgfMethod::Deformed) - 1.0)});
      if (chain) unit = std::max(unit, std::abs(classical_mgf(*chain, t, 0.0) - 1.0));
    }
    v.bound("mgf.paths" + tag, paths, c.tol, chain ? "direct, deformed, classical" : "direct, deformed");
    v.bound("mgf.normalization" + tag, unit, 1e-12);
  });
  v.guarded("symmetry" + tag, [&] {
    double worst = 0.0;
    for (double t : c.scenario.times) {
      const auto law = delta_distribution(part.generator, part.steady_state, s, t);
      const double gap_tol = 10.0 * default_gap_tol(s);
      for (std::size_t k = 0; k < law.support.size(); ++k)
        worst = std::max(worst, std::abs(law.probabilities[k] - law.probability_of(-law.support[k], gap_tol)));
      worst = std::max(worst, std::abs(expected_delta(part.generator, part.steady_state, s, t)));
    }
    v.bound("symmetry" + tag, worst, std::max(1e-10, c.tol * 0.1), "initial state set to the reservoir steady state");
  });
}

void verify_entropy(const Context& c, Verifier& v) {
  const auto& decomp = decomposition(c);
  const DensityMatrix& rho0 = c.model.initial_state;
  v.guarded("entropy.relative_nonnegative", [&] {
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& part : decomp.parts) lowest = std::min(lowest, relative_entropy(rho0, part.steady_state).as_double());
    v.bound("entropy.relative_nonnegative", -lowest, 0.0, "negated minimum over reservoirs");
  });
  v.guarded("entropy.balance", [&] {
    double worst = 0.0;
    std::size_t used = 0;
    for (double t : c.scenario.times) {
      const auto report = entropy_balance(decomp, rho0, t);
      if (!report.faithful || report.residual.is_infinite()) continue;
      ++used;
      worst = std::max(worst, report.residual.value() / std::max(1.0, std::abs(report.entropy_derivative)));
    }
    if (used == 0) {
      v.row("entropy.balance", "skip", "", "", "no faithful propagated state on the time grid");
    } else {
      v.bound("entropy.balance", worst, 1e-6, "finite-difference limited, " + std::to_string(used) + " times");
    }
  });
  v.guarded("entropy.finiteness", [&] {
    const auto report = finiteness_scan(decomp.total, rho0, c.scenario.times);
    v.row("entropy.finiteness", report.consistent ? "pass" : "fail", optional_num(report.finite_from), "",
          report.initial_faithful ? "faithful initial state" : "finite from the reported time");
  });
}

void verify_qrm(const Context& c, Verifier& v) {
  if (!c.model.qrm_parts) return;
  v.guarded("qrm", [&] {
    struct Worst {
      double ratio = 0.0;
      double diff = 0.0;
      double threshold = 0.0;
    };
    std::map<std::string, Worst> worst;
    std::map<std::string, std::string> skipped;
    std::vector<std::string> order;
    for (const auto& r : qrm_comparisons(c)) {
      if (!worst.count(r.quantity) && !skipped.count(r.quantity)) order.push_back(r.quantity);
      if (r.skipped) {
        skipped[r.quantity] = r.note;
        continue;
      }
      auto& w = worst[r.quantity];
      const double ratio = r.diff / r.threshold;
      if (ratio >= w.ratio) w = {ratio, r.diff, r.threshold};
    }
    for (const auto& q : order) {
      if (skipped.count(q)) {
        v.row("qrm." + q, "skip", "", "", skipped[q]);
      } else {
        const Worst& w = worst[q];
        v.row("qrm." + q, w.ratio <= 1.0 ? "pass" : "fail", num(w.diff), num(w.threshold), "closed form vs generic engine");
      }
    }
  });
}

int cmd_verify(const Context& c) {
  Verifier v(c);
  verify_cptp(c, v);
  v.guarded("steady", [&] {
    const Lindbladian& total = decomposition(c).total;
    const bool relaxing = is_relaxing(total, c.scenario.tolerances.kernel);
    v.row("steady.relaxing", "info", relaxing ? "1" : "0", "", relaxing ? "unique attracting steady state" : "not relaxing");
  });
  for (std::size_t j = 0; j < decomposition(c).size(); ++j) verify_reservoir(c, v, j);
  verify_entropy(c, v);
  verify_qrm(c, v);
  return v.failed() ? kExitNumeric : kExitOk;
}

using Command = int (*)(const Context&);

const std::vector<std::pair<std::string, Command>>& command_table() {
  static const std::vector<std::pair<std::string, Command>> table{
      {"steady", cmd_steady}, {"evolve", cmd_evolve}, {"db-check", cmd_db_check}, {"ttm", cmd_ttm},
      {"mgf", cmd_mgf},       {"chain", cmd_chain},   {"qrm-demo", cmd_qrm_demo}, {"verify", cmd_verify},
  };
  return table;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return kExitUsage;
    case ErrorKind::Validation:
    case ErrorKind::InvalidArgument: return kExitValidation;
    case ErrorKind::Hypothesis: return kExitHypothesis;
    case ErrorKind::Numeric: return kExitNumeric;
  }
  return kExitNumeric;
}

double effective_tolerance(const Scenario& scenario, const RunOptions& options) {
  if (options.tol) return *options.tol;
  if (const char* env = std::getenv("QTMP_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0.0 && std::isfinite(v)) return v;
  }
  return scenario.tolerances.comparison;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& entry : command_table()) out.push_back(entry.first);
    return out;
  }();
  return names;
}

int run_command(const std::string& command, const Scenario& scenario, std::ostream& out, std::ostream& err,
                const RunOptions& options) {
  const auto& table = command_table();
  const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == command; });
  if (it == table.end()) {
    err << "error: unknown command '" << command << "'\n";
    return kExitUsage;
  }
  if (options.tol && !(*options.tol > 0.0)) {
    err << "error: tolerance must be positive\n";
    return kExitUsage;
  }
  try {
    const BuiltModel model = build_model(scenario);
    const Context context{scenario, model, options, effective_tolerance(scenario, options), out, err};
    return it->second(context);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

int run_scenario_file(const std::string& command, const std::string& scenario_path, const std::string& out_path,
                      std::ostream& err, const RunOptions& options) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), command) == names.end()) {
    err << "error: unknown command '" << command << "'\n";
    return kExitUsage;
  }
  Scenario scenario;
  try {
    scenario = load_scenario(scenario_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  if (out_path.empty()) return run_command(command, scenario, std::cout, err, options);
  std::ostringstream buffer;
  const int code = run_command(command, scenario, buffer, err, options);
  std::ofstream file(out_path, std::ios::binary);
  if (!file) {
    err << "error: cannot write " << out_path << '\n';
    return kExitUsage;
  }
  file << buffer.str();
  return code;
}

}  // namespace qtmp
