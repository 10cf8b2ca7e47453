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

#include "qtmp/qtmp.h"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "qtmp/classical_chain.hpp"
#include "qtmp/detailed_balance.hpp"
#include "qtmp/entropy.hpp"
#include "qtmp/error.hpp"
#include "qtmp/lindblad.hpp"
#include "qtmp/runner.hpp"
#include "qtmp/scenario.hpp"
#include "qtmp/two_time.hpp"

struct qtmp_operator {
  qtmp::Operator m;
};

struct qtmp_lindbladian {
  qtmp::Lindbladian l;
};

struct qtmp_chain {
  qtmp::Ctmc chain;
};

struct qtmp_scenario {
  qtmp::Scenario scenario;
};

namespace {

thread_local std::string last_error;

qtmp_status status_of(qtmp::ErrorKind kind) { return static_cast<qtmp_status>(static_cast<int>(kind)); }

template <class F>
qtmp_status guard(F&& body) {
  last_error.clear();
  try {
    body();
    return QTMP_OK;
  } catch (const qtmp::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return QTMP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return QTMP_ERR_INTERNAL;
  }
}

void require_pointer(const void* p, const char* name) {
  if (!p) qtmp::fail(qtmp::ErrorKind::InvalidArgument, std::string(name) + " must not be NULL");
}

qtmp::DensityMatrix state(const qtmp_operator* op, const char* name) {
  require_pointer(op, name);
  return qtmp::DensityMatrix(op->m);
}

qtmp_operator* wrap(qtmp::Operator m) { return new qtmp_operator{std::move(m)}; }

}  // namespace

extern "C" {

const char* qtmp_version(void) { return "0.1.0"; }

const char* qtmp_last_error(void) { return last_error.c_str(); }

qtmp_status qtmp_operator_create(size_t dim, const double* re_im, qtmp_operator** out) {
  return guard([&] {
    require_pointer(re_im, "re_im");
    require_pointer(out, "out");
    if (dim == 0) qtmp::fail(qtmp::ErrorKind::InvalidArgument, "dim must be positive");
    const auto d = static_cast<qtmp::Index>(dim);
    qtmp::Operator m(d, d);
    for (qtmp::Index r = 0; r < d; ++r)
      for (qtmp::Index c = 0; c < d; ++c) {
        const size_t k = 2 * static_cast<size_t>(r * d + c);
        if (!std::isfinite(re_im[k]) || !std::isfinite(re_im[k + 1]))
          qtmp::fail(qtmp::ErrorKind::InvalidArgument, "operator entries must be finite");
        m(r, c) = qtmp::Complex(re_im[k], re_im[k + 1]);
      }
    *out = wrap(std::move(m));
  });
}

void qtmp_operator_destroy(qtmp_operator* op) { delete op; }

size_t qtmp_operator_dim(const qtmp_operator* op) { return op ? static_cast<size_t>(op->m.rows()) : 0; }

qtmp_status qtmp_operator_get(const qtmp_operator* op, double* re_im, size_t length) {
  if (op && length < static_cast<size_t>(2 * op->m.size())) {
    last_error = "buffer too small";
    return QTMP_ERR_BUFFER_TOO_SMALL;
  }
  return guard([&] {
    require_pointer(op, "op");
    require_pointer(re_im, "re_im");
    const auto d = op->m.rows();
    for (qtmp::Index r = 0; r < d; ++r)
      for (qtmp::Index c = 0; c < d; ++c) {
        const size_t k = 2 * static_cast<size_t>(r * d + c);
        re_im[k] = op->m(r, c).real();
        re_im[k + 1] = op->m(r, c).imag();
      }
  });
}

qtmp_status qtmp_lindbladian_create(const qtmp_operator* hamiltonian, const qtmp_operator* const* kraus,
                                    size_t kraus_count, qtmp_lindbladian** out) {
  return guard([&] {
    require_pointer(hamiltonian, "hamiltonian");
    require_pointer(out, "out");
    if (kraus_count > 0) require_pointer(kraus, "kraus");
    std::vector<qtmp::Operator> ops;
    for (size_t k = 0; k < kraus_count; ++k) {
      require_pointer(kraus[k], "kraus[k]");
      ops.push_back(kraus[k]->m);
    }
    *out = new qtmp_lindbladian{qtmp::Lindbladian(hamiltonian->m, std::move(ops))};
  });
}

void qtmp_lindbladian_destroy(qtmp_lindbladian* l) { delete l; }

qtmp_status qtmp_lindbladian_apply(const qtmp_lindbladian* l, const qtmp_operator* rho, qtmp_operator** out) {
  return guard([&] {
    require_pointer(l, "l");
    require_pointer(rho, "rho");
    require_pointer(out, "out");
    *out = wrap(qtmp::apply_generator(l->l, rho->m));
  });
}

qtmp_status qtmp_propagate(const qtmp_lindbladian* l, const qtmp_operator* rho0, double t, qtmp_operator** out) {
  return guard([&] {
    require_pointer(l, "l");
    require_pointer(rho0, "rho0");
    require_pointer(out, "out");
    *out = wrap(qtmp::propagate_operator(l->l, rho0->m, t));
  });
}

qtmp_status qtmp_is_relaxing(const qtmp_lindbladian* l, int* relaxing) {
  return guard([&] {
    require_pointer(l, "l");
    require_pointer(relaxing, "relaxing");
    *relaxing = qtmp::is_relaxing(l->l) ? 1 : 0;
  });
}

qtmp_status qtmp_steady_state(const qtmp_lindbladian* l, qtmp_operator** out) {
  return guard([&] {
    require_pointer(l, "l");
    require_pointer(out, "out");
    *out = wrap(qtmp::unique_steady_state(l->l).matrix());
  });
}

qtmp_status qtmp_check_db(const qtmp_lindbladian* l, const qtmp_operator* rho, double s, double tol, int* holds,
                          double* residual) {
  return guard([&] {
    require_pointer(l, "l");
    require_pointer(holds, "holds");
    const auto report = qtmp::check_db(state(rho, "rho"), l->l, s, tol > 0.0 ? tol : qtmp::kDefaultDbTol);
    *holds = report.holds ? 1 : 0;
    if (residual) *residual = report.residual;
  });
}

qtmp_status qtmp_von_neumann_entropy(const qtmp_operator* rho, double* out) {
  return guard([&] {
    require_pointer(out, "out");
    *out = qtmp::von_neumann_entropy(state(rho, "rho"));
  });
}

qtmp_status qtmp_relative_entropy(const qtmp_operator* mu, const qtmp_operator* nu, double* out, int* infinite) {
  return guard([&] {
    require_pointer(out, "out");
    require_pointer(infinite, "infinite");
    const auto v = qtmp::relative_entropy(state(mu, "mu"), state(nu, "nu"));
    *infinite = v.is_infinite() ? 1 : 0;
    *out = v.is_infinite() ? 0.0 : v.value();
  });
}

qtmp_status qtmp_mgf(const qtmp_lindbladian* l, const qtmp_operator* rho_plus, const qtmp_operator* rho0, double t,
                     double alpha, int deformed, double* out) {
  return guard([&] {
    require_pointer(l, "l");
    require_pointer(out, "out");
    const auto s = qtmp::spectral_decompose(-state(rho_plus, "rho_plus").log());
    *out = qtmp::mgf(l->l, state(rho0, "rho0"), s, t, alpha, deformed ? qtmp::MgfMethod::Deformed : qtmp::MgfMethod::Direct);
  });
}

qtmp_status qtmp_delta_distribution(const qtmp_lindbladian* l, const qtmp_operator* rho_plus, const qtmp_operator* rho0,
                                    double t, double* support, double* probabilities, size_t capacity, size_t* count) {
  bool too_small = false;
  const qtmp_status status = guard([&] {
    require_pointer(l, "l");
    require_pointer(count, "count");
    const auto s = qtmp::spectral_decompose(-state(rho_plus, "rho_plus").log());
    const auto law = qtmp::delta_distribution(l->l, state(rho0, "rho0"), s, t);
    *count = law.support.size();
    if (capacity < law.support.size()) {
      too_small = true;
      return;
    }
    for (size_t k = 0; k < law.support.size(); ++k) {
      if (support) support[k] = law.support[k];
      if (probabilities) probabilities[k] = law.probabilities[k];
    }
  });
  if (status == QTMP_OK && too_small) {
    last_error = "buffer too small";
    return QTMP_ERR_BUFFER_TOO_SMALL;
  }
  return status;
}

qtmp_status qtmp_chain_extract(const qtmp_lindbladian* l, const qtmp_operator* rho, const qtmp_operator* rho0,
                               qtmp_chain** out) {
  return guard([&] {
    require_pointer(l, "l");
    require_pointer(out, "out");
    *out = new qtmp_chain{qtmp::extract_chain(l->l, state(rho, "rho"), state(rho0, "rho0"))};
  });
}

void qtmp_chain_destroy(qtmp_chain* chain) { delete chain; }

size_t qtmp_chain_size(const qtmp_chain* chain) { return chain ? chain->chain.states.size() : 0; }

qtmp_status qtmp_chain_get(const qtmp_chain* chain, double* states, double* rates, size_t n) {
  if (chain && n < chain->chain.states.size()) {
    last_error = "buffer too small";
    return QTMP_ERR_BUFFER_TOO_SMALL;
  }
  return guard([&] {
    require_pointer(chain, "chain");
    const auto& c = chain->chain;
    const qtmp::Index size = c.size();
    for (qtmp::Index a = 0; a < size; ++a) {
      if (states) states[a] = c.states[a];
      for (qtmp::Index b = 0; b < size; ++b)
        if (rates) rates[a * size + b] = c.q(a, b);
    }
  });
}

qtmp_status qtmp_chain_export_csv(const qtmp_chain* chain, const char* path) {
  return guard([&] {
    require_pointer(chain, "chain");
    require_pointer(path, "path");
    std::ofstream out(path, std::ios::binary);
    if (!out) qtmp::fail(qtmp::ErrorKind::InvalidArgument, std::string("cannot write ") + path);
    qtmp::write_chain_csv(out, chain->chain);
  });
}

qtmp_status qtmp_scenario_load(const char* path, qtmp_scenario** out) {
  return guard([&] {
    require_pointer(path, "path");
    require_pointer(out, "out");
    *out = new qtmp_scenario{qtmp::load_scenario(path)};
  });
}

void qtmp_scenario_destroy(qtmp_scenario* scenario) { delete scenario; }

void qtmp_run_options_init(qtmp_run_options* options) {
  if (!options) return;
  const qtmp::RunOptions defaults;
  options->tol = 0.0;
  options->seed = defaults.seed;
  options->chain_matrix = 0;
}

int qtmp_run(const qtmp_scenario* scenario, const char* command, const char* out_path,
             const qtmp_run_options* options) {
  last_error.clear();
  if (!scenario || !command) {
    last_error = "scenario and command must not be NULL";
    return qtmp::kExitUsage;
  }
  qtmp::RunOptions opts;
  if (options) {
    if (options->tol > 0.0) opts.tol = options->tol;
    opts.seed = options->seed;
    opts.chain_matrix = options->chain_matrix != 0;
  }
  std::ostringstream diagnostics;
  int code = qtmp::kExitNumeric;
  try {
    if (out_path && *out_path) {
      std::ostringstream buffer;
      code = qtmp::run_command(command, scenario->scenario, buffer, diagnostics, opts);
      std::ofstream file(out_path, std::ios::binary);
      if (!file) {
        diagnostics << "error: cannot write " << out_path << '\n';
        code = qtmp::kExitUsage;
      } else {
        file << buffer.str();
      }
    } else {
      code = qtmp::run_command(command, scenario->scenario, std::cout, diagnostics, opts);
      std::cout.flush();
    }
  } catch (const std::exception& e) {
    diagnostics << "error: " << e.what() << '\n';
  }
  last_error = diagnostics.str();
  return code;
}

}  // extern "C"
