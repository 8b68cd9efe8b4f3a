// Copyright 2026 The coalsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coalsim/potential.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "coalsim/quadrature.hpp"
#include "coalsim/transition.hpp"

namespace coalsim {

namespace {

std::vector<double> oscillation_breaks(const JumpKernel& kernel, double ax, double max_width) {
  const auto base = kernel.psi_breaks();
  std::vector<double> br{base[0]};
  for (std::size_t i = 0; i + 1 < base.size(); ++i) {
    const double a = base[i], b = base[i + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil(ax * (b - a) / max_width)));
    for (int p = 1; p < pieces; ++p) {
      br.push_back(a + (b - a) * p / pieces);
    }
    br.push_back(b);
  }
  return br;
}

double require(const QuadResult<double>& r, double tol, const char* what) {
  if (r.error > tol) {
    throw QuadratureError(std::string(what) + ": error bound " + std::to_string(r.error), r.error);
  }
  return r.value;
}

}  // namespace

double potential_kernel(const JumpKernel& kernel, std::int64_t x) {
  if (x == 0) {
    return 0.0;
  }
  const double xd = std::abs(static_cast<double>(x));
  const auto br = oscillation_breaks(kernel, xd, 2.0 * M_PI);
  AdaptiveOptions opt;
  opt.abs_tol = 1e-11;
  opt.rel_tol = 1e-12;
  const auto r = integrate(
      [&](double u) {
        const double s = std::sin(0.5 * xd * u);
        return 2.0 * s * s / kernel.psi_cached(u);
      },
      std::span<const double>(br), opt);
  return require(r, 1e-8, "potential_kernel") / M_PI;
}

double potential_kernel_partial(const JumpKernel& kernel, std::int64_t x, double t) {
  if (x == 0 || t <= 0.0) {
    return 0.0;
  }
  const auto& gl = gauss_legendre(16);
  std::vector<double> edges{0.0, std::min(t, 1.0)};
  while (edges.back() < t) {
    edges.push_back(std::min(t, 2.0 * edges.back()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double c = 0.5 * (edges[i] + edges[i + 1]), h = 0.5 * (edges[i + 1] - edges[i]);
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      sum += h * gl.weights[k] * transition_difference(kernel, x, c + h * gl.nodes[k]);
    }
  }
  return sum;
}

double potential_kernel_partial_spectral(const JumpKernel& kernel, std::int64_t x, double t) {
  if (x == 0 || t <= 0.0) {
    return 0.0;
  }
  const double xd = std::abs(static_cast<double>(x));
  const auto br = oscillation_breaks(kernel, xd, 2.0 * M_PI);
  AdaptiveOptions opt;
  opt.abs_tol = 1e-11;
  opt.rel_tol = 1e-12;
  const auto r = integrate(
      [&](double u) {
        const double s = std::sin(0.5 * xd * u);
        const double psi = kernel.psi_cached(u);
        return 2.0 * s * s * (-std::expm1(-t * psi)) / psi;
      },
      std::span<const double>(br), opt);
  return require(r, 1e-8, "potential_kernel_partial_spectral") / M_PI;
}

PotentialIdentity potential_identity(const JumpKernel& kernel, std::int64_t cutoff) {
  PotentialIdentity out;
  out.cutoff = cutoff;
  // Smallest terms first.
  double a_last = 0.0;
  for (std::int64_t y = cutoff; y >= 1; --y) {
    const double a = potential_kernel(kernel, y);
    if (y == cutoff) {
      a_last = a;
    }
    out.truncated_sum += kernel.magnitude_mass(static_cast<wide_uint>(y)) * a;
  }
  const auto K = static_cast<std::uint64_t>(cutoff) + 1;
  const auto br = oscillation_breaks(kernel, static_cast<double>(K), 2.0 * M_PI);
  AdaptiveOptions opt;
  opt.abs_tol = 1e-8;
  opt.rel_tol = 1e-9;
  const auto r = integrate(
      [&](double u) { return kernel.psi_tail(K, u) / kernel.psi_cached(u); },
      std::span<const double>(br), opt);
  out.remainder = require(r, 1e-6, "potential_identity remainder") / M_PI;
  out.total = out.truncated_sum + out.remainder;
  out.crude_tail = kernel.tail(K) * a_last;
  return out;
}

}  // namespace coalsim
