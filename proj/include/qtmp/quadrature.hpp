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

// Composite Simpson rules used by the trajectory integrals.

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace qtmp {

/// Composite Simpson on [a, b] with `nodes` points (forced odd, >= 3).
template <class F>
double simpson(F&& f, double a, double b, std::size_t nodes) {
  if (nodes < 3) nodes = 3;
  if (nodes % 2 == 0) ++nodes;
  const std::size_t panels = nodes - 1;
  const double h = (b - a) / static_cast<double>(panels);
  double sum = f(a) + f(b);
  for (std::size_t k = 1; k < panels; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(k));
  return sum * h / 3.0;
}

struct QuadratureResult {
  double value = 0.0;
  std::size_t nodes = 0;
  bool converged = false;
};

/// Doubles the panel count from `nodes` until the relative change drops
/// below rel_tol (or max_nodes is reached).
template <class F>
QuadratureResult adaptive_simpson(F&& f, double a, double b, std::size_t nodes = 201, double rel_tol = 1e-6,
                                  std::size_t max_nodes = 6401) {
  QuadratureResult out;
  double previous = simpson(f, a, b, nodes);
  while (true) {
    const std::size_t next = 2 * nodes - 1;
    if (next > max_nodes) {
      out.value = previous;
      out.nodes = nodes;
      return out;
    }
    const double current = simpson(f, a, b, next);
    nodes = next;
    if (std::abs(current - previous) <= rel_tol * std::max(1.0, std::abs(current))) {
      out.value = current;
      out.nodes = nodes;
      out.converged = true;
      return out;
    }
    previous = current;
  }
}

/// Integral over [0, t_max] on a log-spaced grid: t = tau (e^u - 1).
template <class F>
QuadratureResult log_spaced_simpson(F&& f, double t_max, double tau, std::size_t nodes = 201, double rel_tol = 1e-6) {
  const double u_max = std::log1p(t_max / tau);
  auto g = [&](double u) {
    const double e = std::exp(u);
    return f(tau * (e - 1.0)) * tau * e;
  };
  return adaptive_simpson(g, 0.0, u_max, nodes, rel_tol);
}

}  // namespace qtmp
